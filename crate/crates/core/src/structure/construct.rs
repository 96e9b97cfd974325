use super::morphism::StructureMorphism;
use super::{Arrow, InfoStructure, Variable};
use crate::error::{Error, Result};

/// A product structure with its projections and the pair indexing.
#[derive(Debug, Clone)]
pub struct ProductStructure {
    pub structure: InfoStructure,
    pub proj1: StructureMorphism,
    pub proj2: StructureMorphism,
    factors: (usize, usize),
}

impl ProductStructure {
    /// Object of the product corresponding to the pair `(i, j)`.
    pub fn pair(&self, i: usize, j: usize) -> usize {
        i * self.factors.1 + j
    }

    /// The pair `(i, j)` realized by product object `k`.
    pub fn unpair(&self, k: usize) -> (usize, usize) {
        (k / self.factors.1, k % self.factors.1)
    }
}

/// Builds the product: objects are pairs, values are value pairs, arrows act
/// componentwise. Projections forget one coordinate.
pub fn product_structure(s1: &InfoStructure, s2: &InfoStructure) -> Result<ProductStructure> {
    let (n1, n2) = (s1.len(), s2.len());
    let mut vars = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            let id = format!("<{};{}>", s1.id(i), s2.id(j));
            let mut values = Vec::with_capacity(s1.var(i).arity() * s2.var(j).arity());
            for a in &s1.var(i).values {
                for b in &s2.var(j).values {
                    values.push(format!("({a};{b})"));
                }
            }
            vars.push(Variable::new(id, values));
        }
    }

    let mut arrows = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            for i2 in 0..n1 {
                for j2 in 0..n2 {
                    if (i, j) == (i2, j2) || !s1.leq(i, i2) || !s2.leq(j, j2) {
                        continue;
                    }
                    let m1 = s1.map(i, i2).unwrap();
                    let m2 = s2.map(j, j2).unwrap();
                    let a2 = s2.var(j).arity();
                    let b2 = s2.var(j2).arity();
                    let map = (0..s1.var(i).arity() * a2)
                        .map(|v| m1[v / a2] * b2 + m2[v % a2])
                        .collect();
                    arrows.push(Arrow {
                        from: i * n2 + j,
                        to: i2 * n2 + j2,
                        map,
                    });
                }
            }
        }
    }

    let terminal = s1.terminal() * n2 + s2.terminal();
    let structure = InfoStructure::assemble(vars, arrows, terminal)?;

    let proj1 = StructureMorphism {
        object_map: (0..n1 * n2).map(|k| k / n2).collect(),
        value_maps: (0..n1 * n2)
            .map(|k| {
                let (i, j) = (k / n2, k % n2);
                let a2 = s2.var(j).arity();
                (0..s1.var(i).arity() * a2).map(|v| v / a2).collect()
            })
            .collect(),
    };
    let proj2 = StructureMorphism {
        object_map: (0..n1 * n2).map(|k| k % n2).collect(),
        value_maps: (0..n1 * n2)
            .map(|k| {
                let (i, j) = (k / n2, k % n2);
                let a2 = s2.var(j).arity();
                (0..s1.var(i).arity() * a2).map(|v| v % a2).collect()
            })
            .collect(),
    };

    Ok(ProductStructure {
        structure,
        proj1,
        proj2,
        factors: (n1, n2),
    })
}

/// A coproduct structure with its two injections.
#[derive(Debug, Clone)]
pub struct CoproductStructure {
    pub structure: InfoStructure,
    pub inj1: StructureMorphism,
    pub inj2: StructureMorphism,
    split: usize,
}

impl CoproductStructure {
    /// Which summand (`false` = left) and which object there produced
    /// coproduct object `k`; `None` for the shared terminal.
    pub fn side_of(&self, k: usize, s1: &InfoStructure, s2: &InfoStructure) -> Option<(bool, usize)> {
        if k == s1.terminal() {
            return None;
        }
        if k < self.split {
            Some((false, k))
        } else {
            let mut j = k - self.split;
            if j >= s2.terminal() {
                j += 1;
            }
            Some((true, j))
        }
    }
}

/// Lays both structures side by side and identifies their terminals.
pub fn coproduct_structure(s1: &InfoStructure, s2: &InfoStructure) -> Result<CoproductStructure> {
    let (n1, n2) = (s1.len(), s2.len());
    for j in 0..n2 {
        if j == s2.terminal() {
            continue;
        }
        if s1.index_of(s2.id(j)).is_ok() {
            return Err(Error::IdClash(s2.id(j).to_string()));
        }
    }

    // Objects: all of s1, then s2 without its terminal.
    let mut vars: Vec<Variable> = s1.vars().to_vec();
    let mut right_index = vec![0usize; n2];
    right_index[s2.terminal()] = s1.terminal();
    for j in 0..n2 {
        if j == s2.terminal() {
            continue;
        }
        right_index[j] = vars.len();
        vars.push(s2.var(j).clone());
    }

    let mut arrows = Vec::new();
    for i in 0..n1 {
        for &j in s1.above(i) {
            arrows.push(Arrow {
                from: i,
                to: j,
                map: s1.map(i, j).unwrap(),
            });
        }
    }
    for i in 0..n2 {
        for &j in s2.above(i) {
            arrows.push(Arrow {
                from: right_index[i],
                to: right_index[j],
                map: s2.map(i, j).unwrap(),
            });
        }
    }

    let structure = InfoStructure::assemble(vars, arrows, s1.terminal())?;
    let inj1 = StructureMorphism {
        object_map: (0..n1).collect(),
        value_maps: (0..n1)
            .map(|i| (0..s1.var(i).arity()).collect())
            .collect(),
    };
    let inj2 = StructureMorphism {
        object_map: right_index,
        value_maps: (0..n2)
            .map(|j| (0..s2.var(j).arity()).collect())
            .collect(),
    };
    Ok(CoproductStructure {
        structure,
        inj1,
        inj2,
        split: n1,
    })
}

/// The canonical embedding of the coproduct into the product: an object of
/// the left summand maps to its pair with the right terminal, and dually.
pub fn embed_coproduct_into_product(
    s1: &InfoStructure,
    s2: &InfoStructure,
    cop: &CoproductStructure,
    prod: &ProductStructure,
) -> StructureMorphism {
    let n = cop.structure.len();
    let mut object_map = Vec::with_capacity(n);
    let mut value_maps = Vec::with_capacity(n);
    for k in 0..n {
        match cop.side_of(k, s1, s2) {
            None => {
                object_map.push(prod.pair(s1.terminal(), s2.terminal()));
                value_maps.push(vec![0]);
            }
            Some((false, i)) => {
                object_map.push(prod.pair(i, s2.terminal()));
                value_maps.push((0..s1.var(i).arity()).collect());
            }
            Some((true, j)) => {
                object_map.push(prod.pair(s1.terminal(), j));
                value_maps.push((0..s2.var(j).arity()).collect());
            }
        }
    }
    StructureMorphism {
        object_map,
        value_maps,
    }
}
