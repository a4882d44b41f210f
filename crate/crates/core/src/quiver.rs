//! Quivers, dimension vectors, Euler forms, potentials and cuts.
//!
//! A potential is a formal integer combination of cycles; every cycle is
//! stored in its canonical rotation (lexicographically minimal arrow-index
//! sequence) so terms equal up to cyclic permutation merge. A cycle
//! `(a_1, ..., a_n)` is read left to right along arrows head-to-tail: the
//! composite morphism is a_n o ... o a_1, and cyclic derivatives return
//! paths in the same convention.

use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuiverError {
    #[error("duplicate vertex id '{0}'")]
    DuplicateVertex(String),
    #[error("duplicate arrow id '{0}'")]
    DuplicateArrow(String),
    #[error("arrow '{id}' references unknown vertex '{vertex}'")]
    UnknownVertex { id: String, vertex: String },
    #[error("unknown arrow id '{0}'")]
    UnknownArrow(String),
    #[error("cycle is not composable at position {0}")]
    NotComposable(usize),
    #[error("cycle is not closed (last target differs from first source)")]
    NotClosed,
    #[error("empty cycle in potential")]
    EmptyCycle,
    #[error("dimension vector has length {got}, expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(
        vertices: Vec<String>,
        arrows: Vec<(String, String, String)>,
    ) -> Result<Quiver, QuiverError> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let index_of = |name: &str| vertices.iter().position(|v| v == name);
        let mut out = Vec::with_capacity(arrows.len());
        let mut ids = BTreeSet::new();
        for (id, from, to) in arrows {
            if !ids.insert(id.clone()) {
                return Err(QuiverError::DuplicateArrow(id));
            }
            let source = index_of(&from).ok_or_else(|| QuiverError::UnknownVertex {
                id: id.clone(),
                vertex: from.clone(),
            })?;
            let target = index_of(&to).ok_or_else(|| QuiverError::UnknownVertex {
                id: id.clone(),
                vertex: to.clone(),
            })?;
            out.push(Arrow { id, source, target });
        }
        Ok(Quiver {
            vertices,
            arrows: out,
        })
    }

    /// One vertex, `m` loops named x1..xm (x, y, z for m <= 3).
    pub fn loop_quiver(m: u32) -> Quiver {
        let names: Vec<String> = match m {
            0 => vec![],
            1 => vec!["x".into()],
            2 => vec!["x".into(), "y".into()],
            3 => vec!["x".into(), "y".into(), "z".into()],
            _ => (1..=m).map(|i| format!("x{}", i)).collect(),
        };
        Quiver::new(
            vec!["1".into()],
            names
                .into_iter()
                .map(|n| (n, "1".into(), "1".into()))
                .collect(),
        )
        .unwrap()
    }

    /// The A2 quiver 1 -> 2 with a single arrow "a".
    pub fn a2() -> Quiver {
        Quiver::new(
            vec!["1".into(), "2".into()],
            vec![("a".into(), "1".into(), "2".into())],
        )
        .unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, id: &str) -> Result<usize, QuiverError> {
        self.arrows
            .iter()
            .position(|a| a.id == id)
            .ok_or_else(|| QuiverError::UnknownArrow(id.to_string()))
    }

    fn check_dim(&self, d: &DimVector) -> Result<(), QuiverError> {
        if d.len() != self.vertices.len() {
            return Err(QuiverError::DimensionMismatch {
                got: d.len(),
                expected: self.vertices.len(),
            });
        }
        Ok(())
    }

    /// The Euler form (d, e) = sum_i d_i e_i - sum_{a: i -> j} d_i e_j.
    pub fn euler_form(&self, d: &DimVector, e: &DimVector) -> Result<i64, QuiverError> {
        self.check_dim(d)?;
        self.check_dim(e)?;
        let mut acc: i64 = d
            .entries()
            .iter()
            .zip(e.entries())
            .map(|(&a, &b)| a as i64 * b as i64)
            .sum();
        for arrow in &self.arrows {
            acc -= d.entries()[arrow.source] as i64 * e.entries()[arrow.target] as i64;
        }
        Ok(acc)
    }

    /// The antisymmetrized Euler form <d, e> = (d, e) - (e, d).
    pub fn antisym_form(&self, d: &DimVector, e: &DimVector) -> Result<i64, QuiverError> {
        Ok(self.euler_form(d, e)? - self.euler_form(e, d)?)
    }

    /// Dimension of the representation space: sum over all arrows of
    /// d_source * d_target.
    pub fn rep_space_weight(&self, d: &DimVector) -> i64 {
        self.arrows
            .iter()
            .map(|a| d.entries()[a.source] as i64 * d.entries()[a.target] as i64)
            .sum()
    }

    /// The same sum restricted to the arrows of the cut.
    pub fn cut_weight(&self, cut: &Cut, d: &DimVector) -> i64 {
        cut.arrows
            .iter()
            .map(|&i| {
                let a = &self.arrows[i];
                d.entries()[a.source] as i64 * d.entries()[a.target] as i64
            })
            .sum()
    }
}

/// One nonnegative integer per vertex. Ordered by total degree, then
/// lexicographically; this is the order used everywhere in output.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct DimVector(pub Vec<u32>);

impl DimVector {
    pub fn zero(len: usize) -> DimVector {
        DimVector(vec![0; len])
    }

    pub fn unit(i: usize, len: usize) -> DimVector {
        let mut v = vec![0; len];
        v[i] = 1;
        DimVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, rhs: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&rhs.0).map(|(&a, &b)| a + b).collect())
    }

    pub fn checked_sub(&self, rhs: &DimVector) -> Option<DimVector> {
        self.0
            .iter()
            .zip(&rhs.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    pub fn scale(&self, k: u32) -> DimVector {
        DimVector(self.0.iter().map(|&a| a * k).collect())
    }

    /// All vectors of the given length with total degree between 1 and n,
    /// in (total, lex) order.
    pub fn all_up_to(len: usize, n: u32) -> Vec<DimVector> {
        if len == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut cur = vec![0u32; len];
        fn rec(cur: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<DimVector>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(DimVector(cur.clone()));
                return;
            }
            for x in 0..=left {
                cur[i] = x;
                rec(cur, i + 1, left - x, out);
            }
        }
        for total in 1..=n {
            rec(&mut cur, 0, total, &mut out);
        }
        out
    }
}

impl PartialOrd for DimVector {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DimVector {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl std::fmt::Display for DimVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, "]")
    }
}

/// A term of a potential: an integer coefficient on a closed composable
/// cycle of arrow indices, stored in canonical rotation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PotentialTerm {
    pub coeff: i64,
    pub cycle: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Potential {
    terms: Vec<PotentialTerm>,
}

fn canonical_rotation(cycle: &[usize]) -> Vec<usize> {
    let n = cycle.len();
    let mut best = cycle.to_vec();
    for r in 1..n {
        let rotated: Vec<usize> = cycle[r..].iter().chain(&cycle[..r]).copied().collect();
        if rotated < best {
            best = rotated;
        }
    }
    best
}

impl Potential {
    pub fn empty() -> Potential {
        Potential::default()
    }

    /// Build from (coefficient, arrow-id cycle) pairs, validating that each
    /// cycle is composable and closed. Terms merge up to cyclic rotation.
    pub fn new(quiver: &Quiver, terms: Vec<(i64, Vec<String>)>) -> Result<Potential, QuiverError> {
        let mut canonical: Vec<PotentialTerm> = Vec::new();
        for (coeff, ids) in terms {
            if ids.is_empty() {
                return Err(QuiverError::EmptyCycle);
            }
            let cycle: Vec<usize> = ids
                .iter()
                .map(|id| quiver.arrow_index(id))
                .collect::<Result<_, _>>()?;
            for k in 0..cycle.len() {
                let here = &quiver.arrows()[cycle[k]];
                let next = &quiver.arrows()[cycle[(k + 1) % cycle.len()]];
                if here.target != next.source {
                    return Err(if k + 1 == cycle.len() {
                        QuiverError::NotClosed
                    } else {
                        QuiverError::NotComposable(k)
                    });
                }
            }
            let cycle = canonical_rotation(&cycle);
            match canonical.iter_mut().find(|t| t.cycle == cycle) {
                Some(t) => t.coeff += coeff,
                None => canonical.push(PotentialTerm { coeff, cycle }),
            }
        }
        canonical.retain(|t| t.coeff != 0);
        canonical.sort_by(|a, b| a.cycle.cmp(&b.cycle));
        Ok(Potential { terms: canonical })
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[PotentialTerm] {
        &self.terms
    }

    /// The cyclic derivative dW/da: for each occurrence of `a` in a cycle
    /// u a v the complementary path v u, a formal sum of paths from
    /// target(a) to source(a). Equal paths merge.
    pub fn cyclic_derivative(
        &self,
        quiver: &Quiver,
        arrow: &str,
    ) -> Result<Vec<(i64, Vec<usize>)>, QuiverError> {
        let a = quiver.arrow_index(arrow)?;
        let mut out: Vec<(i64, Vec<usize>)> = Vec::new();
        for term in &self.terms {
            for (k, &c) in term.cycle.iter().enumerate() {
                if c != a {
                    continue;
                }
                // cycle = u a v as words in travel order; complement is v u
                let mut path: Vec<usize> = term.cycle[k + 1..].to_vec();
                path.extend_from_slice(&term.cycle[..k]);
                match out.iter_mut().find(|(_, p)| *p == path) {
                    Some((coeff, _)) => *coeff += term.coeff,
                    None => out.push((term.coeff, path)),
                }
            }
        }
        out.retain(|(c, _)| *c != 0);
        out.sort_by(|a, b| a.1.cmp(&b.1));
        Ok(out)
    }

    /// True iff every cycle of the potential contains exactly one arrow of
    /// the cut, counted with multiplicity.
    pub fn validate_cut(&self, cut: &Cut) -> bool {
        self.terms
            .iter()
            .all(|t| t.cycle.iter().filter(|i| cut.arrows.contains(i)).count() == 1)
    }
}

/// A subset of the arrows, meant to meet every potential cycle exactly once.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Cut {
    pub arrows: BTreeSet<usize>,
}

impl Cut {
    pub fn empty() -> Cut {
        Cut::default()
    }

    pub fn from_ids(quiver: &Quiver, ids: &[String]) -> Result<Cut, QuiverError> {
        let mut arrows = BTreeSet::new();
        for id in ids {
            arrows.insert(quiver.arrow_index(id)?);
        }
        Ok(Cut { arrows })
    }

    pub fn contains(&self, arrow: usize) -> bool {
        self.arrows.contains(&arrow)
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}
