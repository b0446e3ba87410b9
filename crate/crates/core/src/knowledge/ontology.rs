use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::KbError;

/// A selectional constraint on a property filler.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraint {
    /// Admits any filler. Returned when nothing in the hierarchy constrains a property.
    Anything,
    /// The filler must be the named concept or one of its IS-A descendants.
    Concept(String),
    /// The filler must be one of the listed literal values (e.g. `male`, `female`).
    Literals(Vec<String>),
    /// The filler must be a scalar on the abstract `[0, 1]` scale within these bounds.
    Range(f64, f64),
}

/// A value a constraint can be checked against.
#[derive(Clone, Debug, PartialEq)]
pub enum PropertyValue {
    Concept(String),
    Scalar(f64),
    Literal(String),
}

/// The `sem` and `default` facets of one property on one concept.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FacetedConstraint {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sem: Option<Constraint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default: Option<Constraint>,
}

impl FacetedConstraint {
    pub fn anything() -> Self {
        FacetedConstraint {
            sem: Some(Constraint::Anything),
            default: None,
        }
    }

    pub fn sem(c: Constraint) -> Self {
        FacetedConstraint {
            sem: Some(c),
            default: None,
        }
    }

    pub fn is_anything(&self) -> bool {
        matches!(self.sem, None | Some(Constraint::Anything)) && self.default.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Concept {
    pub name: String,
    #[serde(default)]
    pub parents: Vec<String>,
    #[serde(default)]
    pub slots: BTreeMap<String, FacetedConstraint>,
}

/// How well a filler satisfies a constraint. Variants are ordered from worst to best.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchDegree {
    None,
    Sem,
    Default,
    Narrow,
    Exact,
}

#[derive(Clone, Debug)]
pub struct Ontology {
    concepts: BTreeMap<String, Concept>,
    // self-inclusive ancestor sets, filled at construction
    ancestors: BTreeMap<String, BTreeSet<String>>,
}

impl Ontology {
    /// Builds and validates an ontology. Returns the ontology plus non-fatal
    /// warnings (defaults that do not narrow their sem facet).
    pub fn new(concepts: Vec<Concept>) -> Result<(Self, Vec<String>), KbError> {
        if concepts.is_empty() {
            return Err(KbError::NoConcepts);
        }
        let mut map = BTreeMap::new();
        for c in concepts {
            if map.contains_key(&c.name) {
                return Err(KbError::Duplicate {
                    kind: "concept",
                    id: c.name,
                });
            }
            map.insert(c.name.clone(), c);
        }
        for c in map.values() {
            for p in &c.parents {
                if !map.contains_key(p) {
                    return Err(KbError::DanglingConcept {
                        owner: c.name.clone(),
                        concept: p.clone(),
                    });
                }
            }
            for (prop, fc) in &c.slots {
                for facet in [&fc.sem, &fc.default].into_iter().flatten() {
                    check_constraint(|n| map.contains_key(n), facet, &format!("{}.{}", c.name, prop))?;
                }
            }
        }
        if let Some(cycle) = find_cycle(&map) {
            return Err(KbError::Cycle(cycle));
        }

        let mut ont = Ontology {
            concepts: map,
            ancestors: BTreeMap::new(),
        };
        let names: Vec<String> = ont.concepts.keys().cloned().collect();
        for n in names {
            let set = ont.ancestors_bfs(&n).into_iter().collect();
            ont.ancestors.insert(n, set);
        }

        let mut warnings = Vec::new();
        for c in ont.concepts.values() {
            for (prop, fc) in &c.slots {
                if let (Some(sem), Some(def)) = (&fc.sem, &fc.default) {
                    if !ont.constraint_narrows(def, sem) {
                        warnings.push(format!(
                            "{}.{}: default facet {:?} does not narrow sem facet {:?}",
                            c.name, prop, def, sem
                        ));
                    }
                }
            }
        }
        Ok((ont, warnings))
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.concepts.contains_key(name)
    }

    pub fn concept(&self, name: &str) -> Result<&Concept, KbError> {
        self.concepts
            .get(name)
            .ok_or_else(|| KbError::UnknownConcept(name.to_string()))
    }

    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.values()
    }

    /// True iff `ancestor` is reachable from `child` via IS-A edges, or the two are equal.
    pub fn is_a(&self, child: &str, ancestor: &str) -> Result<bool, KbError> {
        let set = self
            .ancestors
            .get(child)
            .ok_or_else(|| KbError::UnknownConcept(child.to_string()))?;
        if !self.concepts.contains_key(ancestor) {
            return Err(KbError::UnknownConcept(ancestor.to_string()));
        }
        Ok(set.contains(ancestor))
    }

    /// `is_a` that treats unknown concepts as unrelated.
    pub fn is_a_lenient(&self, child: &str, ancestor: &str) -> bool {
        self.ancestors.get(child).is_some_and(|s| s.contains(ancestor))
    }

    /// Self first, then ancestors in breadth-first order following declared parent order.
    pub fn ancestors_bfs(&self, name: &str) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([name.to_string()]);
        while let Some(n) = queue.pop_front() {
            if !seen.insert(n.clone()) {
                continue;
            }
            if let Some(c) = self.concepts.get(&n) {
                queue.extend(c.parents.iter().cloned());
            }
            out.push(n);
        }
        out
    }

    /// One IS-A path from `name` up to a root, following first parents.
    pub fn is_a_path(&self, name: &str) -> Result<Vec<String>, KbError> {
        let mut path = vec![self.concept(name)?.name.clone()];
        let mut cur = self.concept(name)?;
        while let Some(p) = cur.parents.first() {
            path.push(p.clone());
            cur = self.concept(p)?;
        }
        Ok(path)
    }

    /// The nearest constraint on `property`, walking up IS-A. Local declarations
    /// shadow inherited ones; absence yields the anything-constraint.
    pub fn constraint_on(&self, concept: &str, property: &str) -> Result<FacetedConstraint, KbError> {
        self.concept(concept)?;
        for anc in self.ancestors_bfs(concept) {
            if let Some(fc) = self.concepts.get(&anc).and_then(|c| c.slots.get(property)) {
                return Ok(fc.clone());
            }
        }
        Ok(FacetedConstraint::anything())
    }

    pub fn admits(&self, constraint: &Constraint, value: &PropertyValue) -> bool {
        match (constraint, value) {
            (Constraint::Anything, _) => true,
            (Constraint::Concept(c), PropertyValue::Concept(v)) => self.is_a_lenient(v, c),
            (Constraint::Literals(ls), PropertyValue::Literal(v)) => ls.iter().any(|l| l.eq_ignore_ascii_case(v)),
            (Constraint::Range(lo, hi), PropertyValue::Scalar(x)) => *lo <= *x && *x <= *hi,
            _ => false,
        }
    }

    /// Degree to which the concept `filler` satisfies `needed`, optionally
    /// tightened by a lexical override.
    pub fn match_degree(
        &self,
        filler: &str,
        needed: &FacetedConstraint,
        lexical_override: Option<&Constraint>,
    ) -> Result<MatchDegree, KbError> {
        self.concept(filler)?;
        let value = PropertyValue::Concept(filler.to_string());
        let sem = needed.sem.clone().unwrap_or(Constraint::Anything);
        let effective = lexical_override.unwrap_or(&sem);
        if !self.admits(effective, &value) {
            return Ok(MatchDegree::None);
        }
        if let Constraint::Concept(c) = effective {
            if c == filler {
                return Ok(MatchDegree::Exact);
            }
        }
        if let Some(ov) = lexical_override {
            if ov != &sem && self.constraint_narrows(ov, &sem) {
                return Ok(MatchDegree::Narrow);
            }
        }
        if let Some(def) = &needed.default {
            if self.admits(def, &value) {
                return Ok(MatchDegree::Default);
            }
        }
        Ok(MatchDegree::Sem)
    }

    /// True iff every filler admitted by `narrow` is admitted by `wide`.
    pub fn constraint_narrows(&self, narrow: &Constraint, wide: &Constraint) -> bool {
        match (narrow, wide) {
            (_, Constraint::Anything) => true,
            (Constraint::Anything, _) => false,
            (Constraint::Concept(n), Constraint::Concept(w)) => self.is_a_lenient(n, w),
            (Constraint::Literals(n), Constraint::Literals(w)) => {
                n.iter().all(|x| w.iter().any(|y| y.eq_ignore_ascii_case(x)))
            }
            (Constraint::Range(nl, nh), Constraint::Range(wl, wh)) => wl <= nl && nh <= wh,
            _ => false,
        }
    }
}

pub(crate) fn check_constraint(exists: impl Fn(&str) -> bool, c: &Constraint, owner: &str) -> Result<(), KbError> {
    match c {
        Constraint::Concept(name) if !exists(name) => Err(KbError::DanglingConcept {
            owner: owner.to_string(),
            concept: name.clone(),
        }),
        Constraint::Range(lo, hi) if !(0.0..=1.0).contains(lo) || !(0.0..=1.0).contains(hi) || lo > hi => {
            Err(KbError::InvalidConstraint {
                owner: owner.to_string(),
                reason: format!("range [{lo}, {hi}] is not an interval inside [0, 1]"),
            })
        }
        _ => Ok(()),
    }
}

fn find_cycle(map: &BTreeMap<String, Concept>) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    fn visit(
        n: &str,
        map: &BTreeMap<String, Concept>,
        marks: &mut BTreeMap<String, Mark>,
        stack: &mut Vec<String>,
    ) -> Option<Vec<String>> {
        match marks.get(n) {
            Some(Mark::Done) => return None,
            Some(Mark::Open) => {
                let start = stack.iter().position(|s| s == n).unwrap_or(0);
                let mut cycle = stack[start..].to_vec();
                cycle.push(n.to_string());
                return Some(cycle);
            }
            None => {}
        }
        marks.insert(n.to_string(), Mark::Open);
        stack.push(n.to_string());
        for p in &map[n].parents {
            if let Some(c) = visit(p, map, marks, stack) {
                return Some(c);
            }
        }
        stack.pop();
        marks.insert(n.to_string(), Mark::Done);
        None
    }
    let mut marks = BTreeMap::new();
    for name in map.keys() {
        let mut stack = Vec::new();
        if let Some(c) = visit(name, map, &mut marks, &mut stack) {
            return Some(c);
        }
    }
    None
}
