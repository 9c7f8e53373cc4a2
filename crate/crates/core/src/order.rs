//! Small order-theoretic helpers: total orders as rank tables, transitive
//! closure of generator pairs, linear extensions and permutations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A strict total order on `0..n`, stored as the sequence of elements from
/// smallest to largest together with the inverse rank table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct TotalOrder {
    sequence: Vec<usize>,
    rank: Vec<usize>,
}

impl TotalOrder {
    pub fn identity(n: usize) -> Self {
        TotalOrder {
            sequence: (0..n).collect(),
            rank: (0..n).collect(),
        }
    }

    /// Builds the order whose smallest element is `sequence[0]`.
    pub fn from_sequence(sequence: Vec<usize>) -> Result<Self> {
        let n = sequence.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, &e) in sequence.iter().enumerate() {
            if e >= n || rank[e] != usize::MAX {
                return Err(Error::InvalidOrder(format!(
                    "{sequence:?} is not a permutation of 0..{n}"
                )));
            }
            rank[e] = pos;
        }
        Ok(TotalOrder { sequence, rank })
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    pub fn rank(&self, e: usize) -> usize {
        self.rank[e]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.rank[a] < self.rank[b]
    }

    pub fn reversed(&self) -> Self {
        let mut seq = self.sequence.clone();
        seq.reverse();
        TotalOrder::from_sequence(seq).expect("reversal of a permutation")
    }
}

impl TryFrom<Vec<usize>> for TotalOrder {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        TotalOrder::from_sequence(v)
    }
}

impl From<TotalOrder> for Vec<usize> {
    fn from(o: TotalOrder) -> Self {
        o.sequence
    }
}

/// Reflexive-free transitive closure of `pairs` over `0..n`. `m[a][b]` holds
/// when `a < b` follows from the generators.
pub fn transitive_closure(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for (a, b) in pairs {
        m[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                for j in 0..n {
                    if m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
    m
}

pub fn has_cycle(closure: &[Vec<bool>]) -> bool {
    closure.iter().enumerate().any(|(i, row)| row[i])
}

/// All linear extensions of the strict partial order `less` restricted to
/// `elements`, each listed smallest first. `less` must be transitively closed
/// and acyclic on `elements`.
pub fn linear_extensions(elements: &[usize], less: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    fn go(
        remaining: &mut Vec<usize>,
        prefix: &mut Vec<usize>,
        less: &dyn Fn(usize, usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        if remaining.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for idx in 0..remaining.len() {
            let e = remaining[idx];
            if remaining.iter().any(|&o| o != e && less(o, e)) {
                continue;
            }
            remaining.remove(idx);
            prefix.push(e);
            go(remaining, prefix, less, out);
            prefix.pop();
            remaining.insert(idx, e);
        }
    }
    let mut out = Vec::new();
    go(&mut elements.to_vec(), &mut Vec::new(), less, &mut out);
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    linear_extensions(&(0..n).collect::<Vec<_>>(), &|_, _| false)
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
