use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ontology::Ontology;
use super::KbError;
use crate::tmr::concept_of_instance;

/// A stored property value for a remembered instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MemoryValue {
    Number(f64),
    Text(String),
    List(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFrame {
    pub id: String,
    #[serde(default)]
    pub slots: BTreeMap<String, MemoryValue>,
}

impl InstanceFrame {
    pub fn text(&self, property: &str) -> Option<&str> {
        match self.slots.get(property)? {
            MemoryValue::Text(s) => Some(s),
            _ => None,
        }
    }
}

/// Long-term episodic memory: what the agent knows about individual instances.
#[derive(Clone, Debug, Default)]
pub struct EpisodicMemory {
    instances: BTreeMap<String, InstanceFrame>,
}

impl EpisodicMemory {
    pub fn new(frames: Vec<InstanceFrame>, ontology: &Ontology) -> Result<Self, KbError> {
        let mut instances = BTreeMap::new();
        for f in frames {
            let concept = concept_of_instance(&f.id).map_err(|_| KbError::MalformedInstanceId(f.id.clone()))?;
            if !ontology.contains(concept) {
                return Err(KbError::DanglingConcept {
                    owner: f.id.clone(),
                    concept: concept.to_string(),
                });
            }
            if instances.contains_key(&f.id) {
                return Err(KbError::Duplicate {
                    kind: "instance",
                    id: f.id,
                });
            }
            instances.insert(f.id.clone(), f);
        }
        Ok(EpisodicMemory { instances })
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&InstanceFrame> {
        self.instances.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.instances.contains_key(id)
    }

    pub fn name_of(&self, id: &str) -> Option<&str> {
        self.get(id)?.text("HAS-NAME")
    }

    pub fn gender_of(&self, id: &str) -> Option<&str> {
        self.get(id)?.text("GENDER")
    }
}
