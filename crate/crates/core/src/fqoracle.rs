//! Brute-force point counting of representation varieties over tiny prime
//! fields: the independent oracle behind every polynomial-count comparison.
//!
//! A request fixes a quiver, an optional potential with a cut, a dimension
//! vector and a prime q <= 5. The oracle enumerates all tuples of matrices
//! over F_q indexed by the arrows outside the cut and counts those killed by
//! every cyclic derivative dW/da, a in the cut. The search space is capped
//! at 10^8 points.

use crate::motive::{Motive, MotiveError};
use crate::quiver::{Cut, DimVector, Potential, Quiver, QuiverError};
use num_rational::BigRational;
use rayon::prelude::*;

const SEARCH_CAP: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("q = {0} is not a prime at most 5")]
    BadPrime(u32),
    #[error("search space of {required} points exceeds the cap of {cap}")]
    CapExceeded { required: u128, cap: u128 },
    #[error("cut is not valid for the potential")]
    InvalidCut,
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Motive(#[from] MotiveError),
}

#[derive(Clone, Debug)]
pub struct CountRequest {
    pub quiver: Quiver,
    pub potential: Option<Potential>,
    pub cut: Cut,
    pub dim: DimVector,
    pub q: u32,
}

impl CountRequest {
    /// All arrows, no relations.
    pub fn free(quiver: Quiver, dim: DimVector, q: u32) -> CountRequest {
        CountRequest {
            quiver,
            potential: None,
            cut: Cut::empty(),
            dim,
            q,
        }
    }

    fn validate(&self) -> Result<(), OracleError> {
        if !matches!(self.q, 2 | 3 | 5) {
            return Err(OracleError::BadPrime(self.q));
        }
        if let Some(w) = &self.potential {
            if !w.validate_cut(&self.cut) {
                return Err(OracleError::InvalidCut);
            }
        } else if !self.cut.is_empty() {
            return Err(OracleError::InvalidCut);
        }
        let required = self.search_space();
        if required > SEARCH_CAP {
            return Err(OracleError::CapExceeded {
                required,
                cap: SEARCH_CAP,
            });
        }
        Ok(())
    }

    /// prod over arrows outside the cut of q^(d_source d_target).
    fn search_space(&self) -> u128 {
        let mut size: u128 = 1;
        for (i, a) in self.quiver.arrows().iter().enumerate() {
            if self.cut.contains(i) {
                continue;
            }
            let cells = self.dim.entries()[a.source] * self.dim.entries()[a.target];
            for _ in 0..cells {
                size = size.saturating_mul(self.q as u128);
            }
        }
        size
    }
}

/// Layout of one free arrow's matrix inside the flat entry vector.
struct Slot {
    offset: usize,
    rows: usize,
    cols: usize,
}

/// One summand of a cyclic derivative: coefficient mod q times the matrix
/// of a path (arrow indices in travel order).
struct RelationTerm {
    coeff: u32,
    path: Vec<usize>,
}

/// dW/da for one cut arrow a, with the matrix shape of its value.
struct Relation {
    terms: Vec<RelationTerm>,
    rows: usize,
    cols: usize,
}

struct Evaluator {
    q: u32,
    slots: Vec<Option<Slot>>,
    entry_count: usize,
    relations: Vec<Relation>,
}

impl Evaluator {
    fn new(req: &CountRequest) -> Result<Evaluator, OracleError> {
        let dims: Vec<usize> = req.dim.entries().iter().map(|&x| x as usize).collect();
        let mut slots = Vec::new();
        let mut offset = 0usize;
        for (i, a) in req.quiver.arrows().iter().enumerate() {
            if req.cut.contains(i) {
                slots.push(None);
                continue;
            }
            let rows = dims[a.target];
            let cols = dims[a.source];
            slots.push(Some(Slot { offset, rows, cols }));
            offset += rows * cols;
        }
        let mut relations = Vec::new();
        if let Some(w) = &req.potential {
            for &c in req.cut.arrows.iter() {
                let arrow = &req.quiver.arrows()[c];
                let id = arrow.id.clone();
                // dW/da is a sum of paths from target(a) to source(a)
                let rows = dims[arrow.source];
                let cols = dims[arrow.target];
                let mut terms = Vec::new();
                for (coeff, path) in w.cyclic_derivative(&req.quiver, &id)? {
                    let coeff = coeff.rem_euclid(req.q as i64) as u32;
                    if coeff == 0 {
                        continue;
                    }
                    terms.push(RelationTerm { coeff, path });
                }
                relations.push(Relation { terms, rows, cols });
            }
        }
        Ok(Evaluator {
            q: req.q,
            slots,
            entry_count: offset,
            relations,
        })
    }

    fn decode(&self, mut index: u128, entries: &mut [u32]) {
        for e in entries.iter_mut() {
            *e = (index % self.q as u128) as u32;
            index /= self.q as u128;
        }
    }

    /// Matrix of the path word (travel order), as rows x cols over F_q.
    /// The empty path is the identity at the given vertex dimension.
    fn path_matrix(&self, entries: &[u32], path: &[usize], rows: usize, cols: usize) -> Vec<u32> {
        if path.is_empty() {
            debug_assert_eq!(rows, cols);
            let mut id = vec![0u32; rows * cols];
            for i in 0..rows {
                id[i * cols + i] = 1;
            }
            return id;
        }
        let first = self.slots[path[0]].as_ref().expect("path avoids the cut");
        let mut cur: Vec<u32> =
            entries[first.offset..first.offset + first.rows * first.cols].to_vec();
        let mut cur_rows = first.rows;
        let cur_cols = first.cols;
        debug_assert_eq!(cur_cols, cols);
        for &p in &path[1..] {
            let slot = self.slots[p].as_ref().expect("path avoids the cut");
            debug_assert_eq!(slot.cols, cur_rows);
            let m = &entries[slot.offset..slot.offset + slot.rows * slot.cols];
            // cur <- M_p * cur
            let mut next = vec![0u32; slot.rows * cur_cols];
            for i in 0..slot.rows {
                for k in 0..slot.cols {
                    let a = m[i * slot.cols + k];
                    if a == 0 {
                        continue;
                    }
                    for j in 0..cur_cols {
                        next[i * cur_cols + j] =
                            (next[i * cur_cols + j] + a * cur[k * cur_cols + j]) % self.q;
                    }
                }
            }
            cur = next;
            cur_rows = slot.rows;
        }
        debug_assert_eq!(cur_rows, rows);
        cur
    }

    fn satisfies_relations(&self, entries: &[u32]) -> bool {
        for relation in &self.relations {
            let mut acc = vec![0u32; relation.rows * relation.cols];
            for term in &relation.terms {
                let m = self.path_matrix(entries, &term.path, relation.rows, relation.cols);
                for (dst, src) in acc.iter_mut().zip(&m) {
                    *dst = (*dst + term.coeff * src) % self.q;
                }
            }
            if acc.iter().any(|&x| x != 0) {
                return false;
            }
        }
        true
    }
}

/// Number of matrix tuples over F_q indexed by the arrows outside the cut
/// satisfying dW/da = 0 for every cut arrow (all tuples when there is no
/// potential).
pub fn count_representations(req: &CountRequest) -> Result<u64, OracleError> {
    req.validate()?;
    let eval = Evaluator::new(req)?;
    let total = req.search_space();
    if eval.relations.is_empty() {
        return Ok(total as u64);
    }
    let total = total as u64;
    // partition by index ranges; summation order does not affect the count
    let chunk: u64 = 1 << 14;
    let chunks = total.div_ceil(chunk);
    let count = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * chunk;
            let hi = ((c + 1) * chunk).min(total);
            let mut entries = vec![0u32; eval.entry_count];
            let mut local = 0u64;
            for idx in lo..hi {
                eval.decode(idx as u128, &mut entries);
                if eval.satisfies_relations(&entries) {
                    local += 1;
                }
            }
            local
        })
        .sum();
    Ok(count)
}

/// |Gl_n(F_q)| by exhaustive enumeration and Gaussian elimination; kept
/// independent of the [Gl(n)] product formula on purpose.
pub fn count_gl(n: u32, q: u32) -> u64 {
    let n = n as usize;
    let cells = n * n;
    let mut total: u64 = 1;
    for _ in 0..cells {
        total *= q as u64;
    }
    let mut count = 0u64;
    let mut m = vec![0u32; cells];
    for idx in 0..total {
        let mut t = idx;
        for e in m.iter_mut() {
            *e = (t % q as u64) as u32;
            t /= q as u64;
        }
        if rank(&mut m.clone(), n, q) == n {
            count += 1;
        }
    }
    count
}

fn rank(m: &mut [u32], n: usize, q: u32) -> usize {
    let mut rank = 0;
    for col in 0..n {
        let pivot = (rank..n).find(|&r| !m[r * n + col].is_multiple_of(q));
        let Some(p) = pivot else { continue };
        if p != rank {
            for j in 0..n {
                m.swap(p * n + j, rank * n + j);
            }
        }
        let inv = mod_inverse(m[rank * n + col], q);
        for j in 0..n {
            m[rank * n + j] = m[rank * n + j] * inv % q;
        }
        for r in 0..n {
            if r != rank && !m[r * n + col].is_multiple_of(q) {
                let f = m[r * n + col];
                for j in 0..n {
                    m[r * n + j] = (m[r * n + j] + (q - f % q) * m[rank * n + j]) % q;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse(a: u32, q: u32) -> u32 {
    (1..q).find(|&x| a * x % q == 1).expect("unit mod prime")
}

/// eval_at_l(motive, q) == count_representations(req), both exact.
pub fn verify_motive_count(motive: &Motive, req: &CountRequest) -> Result<bool, OracleError> {
    let expected = motive.eval_at_l(&BigRational::from_integer(req.q.into()))?;
    let counted = count_representations(req)?;
    Ok(expected == BigRational::from_integer(counted.into()))
}
