//! Finite information structures: posets of variables with surjective
//! value maps toward coarser variables and a terminal one-point variable.

mod build;
mod construct;
mod minimal;
mod model;
mod morphism;
mod sections;
mod validate;

pub use build::{build_concrete_structure, build_simplicial_structure, ConcreteStructure};
pub use construct::{coproduct_structure, embed_coproduct_into_product, product_structure};
pub use minimal::{analyze_minimal, components, minimal_objects, MinimalAnalysis, MinimalObject};
pub use model::{check_model, coproduct_model, induced_model, product_model, ClassicalModel};
pub use morphism::{pairing, validate_morphism, MorphismReport, StructureMorphism};
pub use sections::{limit_sections, Section};
pub use validate::{validate_structure, AxiomCheck, ValidationReport};

use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

/// A variable (observable) with its finite value set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub id: String,
    pub values: Vec<String>,
}

impl Variable {
    pub fn new(id: impl Into<String>, values: Vec<String>) -> Variable {
        Variable {
            id: id.into(),
            values,
        }
    }

    pub fn arity(&self) -> usize {
        self.values.len()
    }
}

/// An arrow of the structure: a map of value sets toward a coarser variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    /// `map[v]` is the target value index of source value `v`.
    pub map: Vec<usize>,
}

/// A finite poset of variables with composed surjections and a designated
/// terminal variable. Immutable after construction; all queries are pure.
#[derive(Debug, Clone)]
pub struct InfoStructure {
    vars: Vec<Variable>,
    by_id: BTreeMap<String, usize>,
    terminal: usize,
    /// Strict reachability: `reach[i]` holds every `j != i` with an arrow `i -> j`.
    reach: Vec<BTreeSet<usize>>,
    /// Composed value maps for every reachable pair.
    maps: BTreeMap<(usize, usize), Vec<usize>>,
}

impl InfoStructure {
    /// Assembles a structure from variables and arrows, closing arrows under
    /// composition. Fails on malformed input or path-dependent composites.
    pub fn assemble(vars: Vec<Variable>, arrows: Vec<Arrow>, terminal: usize) -> Result<Self> {
        let mut by_id = BTreeMap::new();
        for (i, v) in vars.iter().enumerate() {
            if v.values.is_empty() {
                return Err(Error::Input(format!("variable `{}` has no values", v.id)));
            }
            let mut seen = BTreeSet::new();
            for val in &v.values {
                if !seen.insert(val) {
                    return Err(Error::Input(format!(
                        "variable `{}` repeats value label `{}`",
                        v.id, val
                    )));
                }
            }
            if by_id.insert(v.id.clone(), i).is_some() {
                return Err(Error::DuplicateId(v.id.clone()));
            }
        }
        if terminal >= vars.len() {
            return Err(Error::Input("terminal index out of range".into()));
        }

        let mut maps: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for a in arrows {
            if a.from >= vars.len() || a.to >= vars.len() {
                return Err(Error::Input("arrow endpoint out of range".into()));
            }
            let (fid, tid) = (vars[a.from].id.clone(), vars[a.to].id.clone());
            if a.map.len() != vars[a.from].arity() {
                return Err(Error::InvalidArrow {
                    from: fid,
                    to: tid,
                    reason: "map length differs from source arity".into(),
                });
            }
            if a.map.iter().any(|&t| t >= vars[a.to].arity()) {
                return Err(Error::InvalidArrow {
                    from: fid,
                    to: tid,
                    reason: "map target out of range".into(),
                });
            }
            if a.from == a.to {
                if a.map.iter().enumerate().any(|(v, &t)| v != t) {
                    return Err(Error::InvalidArrow {
                        from: fid,
                        to: tid,
                        reason: "non-identity self arrow".into(),
                    });
                }
                continue;
            }
            match maps.get(&(a.from, a.to)) {
                Some(prev) if *prev != a.map => {
                    return Err(Error::InvalidArrow {
                        from: fid,
                        to: tid,
                        reason: "two different maps for the same pair".into(),
                    });
                }
                _ => {
                    maps.insert((a.from, a.to), a.map);
                }
            }
        }

        // Transitive closure; composites must be path independent.
        loop {
            let mut additions: Vec<((usize, usize), Vec<usize>)> = Vec::new();
            for (&(i, j), m_ij) in &maps {
                for (&(j2, k), m_jk) in &maps {
                    if j2 != j {
                        continue;
                    }
                    let composite: Vec<usize> = m_ij.iter().map(|&v| m_jk[v]).collect();
                    if i == k {
                        if composite.iter().enumerate().any(|(v, &t)| v != t) {
                            return Err(Error::InconsistentComposite {
                                from: vars[i].id.clone(),
                                to: vars[k].id.clone(),
                            });
                        }
                        continue;
                    }
                    match maps.get(&(i, k)) {
                        Some(existing) => {
                            if *existing != composite {
                                return Err(Error::InconsistentComposite {
                                    from: vars[i].id.clone(),
                                    to: vars[k].id.clone(),
                                });
                            }
                        }
                        None => additions.push(((i, k), composite)),
                    }
                }
            }
            if additions.is_empty() {
                break;
            }
            for ((i, k), m) in additions {
                match maps.get(&(i, k)) {
                    Some(existing) => {
                        if *existing != m {
                            return Err(Error::InconsistentComposite {
                                from: vars[i].id.clone(),
                                to: vars[k].id.clone(),
                            });
                        }
                    }
                    None => {
                        maps.insert((i, k), m);
                    }
                }
            }
        }

        let mut reach = vec![BTreeSet::new(); vars.len()];
        for &(i, j) in maps.keys() {
            reach[i].insert(j);
        }
        Ok(InfoStructure {
            vars,
            by_id,
            terminal,
            reach,
            maps,
        })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var(&self, i: usize) -> &Variable {
        &self.vars[i]
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn terminal(&self) -> usize {
        self.terminal
    }

    pub fn id(&self, i: usize) -> &str {
        &self.vars[i].id
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.by_id
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownId(id.to_string()))
    }

    /// Non-terminal variable indices in ascending order.
    pub fn non_terminal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| i != self.terminal).collect()
    }

    /// True when `i` refines `j` (arrow `i -> j` exists) or `i == j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.reach[i].contains(&j)
    }

    /// Strictly coarser variables reachable from `i`.
    pub fn above(&self, i: usize) -> &BTreeSet<usize> {
        &self.reach[i]
    }

    /// The composed surjection `E(i) -> E(j)`; `i == j` yields the identity.
    pub fn map(&self, i: usize, j: usize) -> Option<Vec<usize>> {
        if i == j {
            return Some((0..self.vars[i].arity()).collect());
        }
        self.maps.get(&(i, j)).cloned()
    }

    /// Applies the composed surjection to a value index.
    pub fn apply(&self, i: usize, j: usize, v: usize) -> Option<usize> {
        if i == j {
            return Some(v);
        }
        self.maps.get(&(i, j)).map(|m| m[v])
    }

    /// Greatest lower bound of `x` and `y` in the refinement order, i.e. the
    /// coarsest common refinement present in the structure. `Ok(None)` when no
    /// common refinement exists; an error when maximal candidates tie.
    pub fn meet(&self, x: usize, y: usize) -> Result<Option<usize>> {
        let lower: Vec<usize> = (0..self.len())
            .filter(|&z| self.leq(z, x) && self.leq(z, y))
            .collect();
        if lower.is_empty() {
            return Ok(None);
        }
        let maximal: Vec<usize> = lower
            .iter()
            .copied()
            .filter(|&z| !lower.iter().any(|&w| w != z && self.leq(z, w)))
            .collect();
        if maximal.len() == 1 {
            let m = maximal[0];
            debug_assert!(lower.iter().all(|&z| self.leq(z, m)));
            Ok(Some(m))
        } else {
            Err(Error::AmbiguousMeet {
                x: self.id(x).to_string(),
                y: self.id(y).to_string(),
                candidates: maximal.iter().map(|&z| self.id(z).to_string()).collect(),
            })
        }
    }

    /// Meet of a non-empty list of variables, folding pairwise.
    pub fn meet_all(&self, items: &[usize]) -> Result<Option<usize>> {
        let mut acc = match items.first() {
            Some(&f) => f,
            None => return Ok(Some(self.terminal)),
        };
        for &x in &items[1..] {
            match self.meet(acc, x)? {
                Some(m) => acc = m,
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }

    /// Length of the longest chain of non-identity arrows.
    pub fn nerve_height(&self) -> usize {
        let n = self.len();
        let mut memo = vec![None; n];
        fn depth(
            s: &InfoStructure,
            i: usize,
            memo: &mut Vec<Option<usize>>,
            guard: &mut Vec<bool>,
        ) -> usize {
            if let Some(d) = memo[i] {
                return d;
            }
            if guard[i] {
                return 0; // cycle; the poset axiom reports it separately
            }
            guard[i] = true;
            let mut best = 0;
            for &j in s.reach[i].iter() {
                best = best.max(1 + depth(s, j, memo, guard));
            }
            guard[i] = false;
            memo[i] = Some(best);
            best
        }
        let mut guard = vec![false; n];
        (0..n)
            .map(|i| depth(self, i, &mut memo, &mut guard))
            .max()
            .unwrap_or(0)
    }
}
