//! Finite groups given by Cayley tables.
//!
//! These are the desk-scale stand-ins for the space of transformations: the
//! restricted pair sum over `{(f, g) | f∘g = h}` becomes a finite enumeration.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

/// Associativity is checked exhaustively up to this order.
pub const MAX_CHECKED_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group order must be positive")]
    EmptyGroup,
    #[error("Cayley table has {got} entries, expected {expected}")]
    TableSize { expected: usize, got: usize },
    #[error("row or column {0} of the Cayley table is not a permutation")]
    NotLatin(usize),
    #[error("Cayley table has no identity element")]
    NoIdentity,
    #[error("product is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("unknown group {name:?}; available: {catalog}")]
    Unknown { name: String, catalog: String },
    #[error("{0}")]
    OutOfRange(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a row-major Cayley table: `table[f * order + g] = f∘g`.
    pub fn from_cayley(name: impl Into<String>, order: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::EmptyGroup);
        }
        if table.len() != order * order {
            return Err(GroupError::TableSize {
                expected: order * order,
                got: table.len(),
            });
        }
        for i in 0..order {
            let mut row = alloc::vec![false; order];
            let mut col = alloc::vec![false; order];
            for j in 0..order {
                let r = table[i * order + j];
                let c = table[j * order + i];
                if r >= order || c >= order || row[r] || col[c] {
                    return Err(GroupError::NotLatin(i));
                }
                row[r] = true;
                col[c] = true;
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| table[e * order + g] == g && table[g * order + e] == g))
            .ok_or(GroupError::NoIdentity)?;
        if order <= MAX_CHECKED_ORDER {
            for a in 0..order {
                for b in 0..order {
                    let ab = table[a * order + b];
                    for c in 0..order {
                        let bc = table[b * order + c];
                        if table[ab * order + c] != table[a * order + bc] {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        }
        // Latin rows guarantee exactly one right inverse per element.
        let inverse = (0..order)
            .map(|f| {
                (0..order)
                    .find(|&g| table[f * order + g] == identity)
                    .expect("latin row contains the identity")
            })
            .collect();
        Ok(FiniteGroup {
            name: name.into(),
            order,
            table,
            identity,
            inverse,
        })
    }

    /// Closes `generators` under `mul` and tabulates the result. Elements
    /// are indexed in their sorted order.
    pub fn generated_by<E, F>(
        name: impl Into<String>,
        identity: E,
        generators: &[E],
        mul: F,
    ) -> Result<Self, GroupError>
    where
        E: Ord + Clone,
        F: Fn(&E, &E) -> E,
    {
        let mut seen: BTreeSet<E> = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(identity.clone());
        queue.push_back(identity);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = mul(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<E> = seen.into_iter().collect();
        let index: BTreeMap<&E, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let order = elements.len();
        let mut table = Vec::with_capacity(order * order);
        for f in &elements {
            for g in &elements {
                let fg = mul(f, g);
                let k = *index
                    .get(&fg)
                    .ok_or_else(|| GroupError::OutOfRange("generated set is not closed".to_string()))?;
                table.push(k);
            }
        }
        Self::from_cayley(name, order, table)
    }

    /// Cyclic group `Cₙ`, element `k` is rotation by `k` steps.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if !(1..=16).contains(&n) {
            return Err(GroupError::OutOfRange(format!("C{n}: need 1 ≤ n ≤ 16")));
        }
        let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        Self::from_cayley(format!("C{n}"), n, table)
    }

    /// Dihedral group of the regular `n`-gon (order `2n`). Element `(k, s)`
    /// is `rᵏ sˢ`, and `s r = r⁻¹ s`.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if !(1..=8).contains(&n) {
            return Err(GroupError::OutOfRange(format!("D{n}: need 1 ≤ n ≤ 8")));
        }
        let r = (1 % n, false);
        let s = (0usize, true);
        Self::generated_by(format!("D{n}"), (0usize, false), &[r, s], |&(k1, s1), &(k2, s2)| {
            let k2 = if s1 { (n - k2) % n } else { k2 };
            ((k1 + k2) % n, s1 ^ s2)
        })
    }

    /// Symmetric group on `k ≤ 4` letters; permutations compose as
    /// `(p∘q)(i) = p(q(i))`.
    pub fn symmetric(k: usize) -> Result<Self, GroupError> {
        if !(1..=4).contains(&k) {
            return Err(GroupError::OutOfRange(format!("S{k}: need 1 ≤ k ≤ 4")));
        }
        let identity: Vec<u8> = (0..k as u8).collect();
        let mut generators = Vec::new();
        if k > 1 {
            let mut swap = identity.clone();
            swap.swap(0, 1);
            let mut cycle = identity.clone();
            cycle.rotate_left(1);
            generators.push(swap);
            generators.push(cycle);
        }
        Self::generated_by(format!("S{k}"), identity, &generators, |p, q| {
            q.iter().map(|&i| p[i as usize]).collect()
        })
    }

    /// The 24 proper rotations of the cube, as signed permutation matrices.
    pub fn cube_rotations() -> Result<Self, GroupError> {
        type M = [[i8; 3]; 3];
        let identity: M = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let about_x: M = [[1, 0, 0], [0, 0, -1], [0, 1, 0]];
        let about_y: M = [[0, 0, 1], [0, 1, 0], [-1, 0, 0]];
        Self::generated_by("cube", identity, &[about_x, about_y], |a: &M, b: &M| {
            let mut out = [[0i8; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
                }
            }
            out
        })
    }

    /// Names accepted by [`FiniteGroup::by_name`].
    pub fn catalog() -> Vec<String> {
        let mut names: Vec<String> = (1..=16).map(|n| format!("C{n}")).collect();
        names.extend((1..=8).map(|n| format!("D{n}")));
        names.extend((1..=4).map(|k| format!("S{k}")));
        names.push("cube".to_string());
        names
    }

    pub fn by_name(name: &str) -> Result<Self, GroupError> {
        let unknown = || GroupError::Unknown {
            name: name.to_string(),
            catalog: Self::catalog().join(", "),
        };
        let trimmed = name.trim();
        if trimmed.eq_ignore_ascii_case("cube") || trimmed.eq_ignore_ascii_case("O") {
            return Self::cube_rotations();
        }
        let (head, rest) = trimmed.split_at(trimmed.char_indices().nth(1).map_or(trimmed.len(), |(i, _)| i));
        let n: usize = rest.parse().map_err(|_| unknown())?;
        match head {
            "C" | "c" if (1..=16).contains(&n) => Self::cyclic(n),
            "D" | "d" if (1..=8).contains(&n) => Self::dihedral(n),
            "S" | "s" if (1..=4).contains(&n) => Self::symmetric(n),
            _ => Err(unknown()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, f: usize) -> usize {
        self.inverse[f]
    }

    /// `f∘g`.
    #[inline]
    pub fn mul(&self, f: usize, g: usize) -> usize {
        self.table[f * self.order + g]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|f| (0..self.order).all(|g| self.mul(f, g) == self.mul(g, f)))
    }
}
