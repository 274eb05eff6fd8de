//! Integer partitions and index subsets used to assemble partition and
//! embedded witnesses.

use serde::{Deserialize, Serialize};

use crate::densemat::{Matrix, RealMatrix};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Parts of a partition, sorted descending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not sorted descending")));
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Half-open ranges of pair indices `i` covered by each part, in order.
    pub fn block_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.parts
            .iter()
            .map(|&m| {
                let r = start..start + m;
                start += m;
                r
            })
            .collect()
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// All partitions of `n` in reverse-lexicographic order.
pub fn partitions(n: usize) -> Result<Vec<Partition>> {
    if n < 1 {
        return Err(Error::InvalidPartition("n must be at least 1".into()));
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, n, &mut cur, &mut out);
    Ok(out)
}

fn fill(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        cur.push(p);
        fill(rest - p, p, cur, out);
        cur.pop();
    }
}

/// Strictly increasing `d1`-subset of `{0,…,d2−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CombinationRepr", into = "CombinationRepr")]
pub struct Combination {
    d2: usize,
    indices: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CombinationRepr {
    d1: usize,
    d2: usize,
    indices: Vec<usize>,
}

impl TryFrom<CombinationRepr> for Combination {
    type Error = Error;

    fn try_from(r: CombinationRepr) -> Result<Self> {
        if r.indices.len() != r.d1 {
            return Err(Error::InvalidCombination(format!(
                "expected {} indices, got {}",
                r.d1,
                r.indices.len()
            )));
        }
        Self::new(r.d2, r.indices)
    }
}

impl From<Combination> for CombinationRepr {
    fn from(c: Combination) -> Self {
        Self {
            d1: c.indices.len(),
            d2: c.d2,
            indices: c.indices,
        }
    }
}

impl Combination {
    pub fn new(d2: usize, indices: Vec<usize>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidCombination("empty index set".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCombination(format!("{indices:?} is not strictly increasing")));
        }
        if indices.last().is_some_and(|&m| m >= d2) {
            return Err(Error::InvalidCombination(format!("{indices:?} exceeds range 0..{d2}")));
        }
        Ok(Self { d2, indices })
    }

    /// Identity embedding of `d` into itself.
    pub fn full(d: usize) -> Self {
        Self {
            d2: d,
            indices: (0..d).collect(),
        }
    }

    pub fn d1(&self) -> usize {
        self.indices.len()
    }

    pub fn d2(&self) -> usize {
        self.d2
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// `|k_c⟩ = |indices[k]⟩`.
    pub fn label(&self, k: usize) -> usize {
        self.indices[k]
    }

    /// Indices of the second factor outside the image, increasing.
    pub fn complement(&self) -> Vec<usize> {
        (0..self.d2).filter(|i| !self.indices.contains(i)).collect()
    }

    /// `d2×d1` isometry `V_c` with `V_c|k⟩ = |indices[k]⟩`.
    pub fn isometry<T: Real>(&self) -> RealMatrix<T> {
        let mut v = RealMatrix::zeros(self.d2, self.d1());
        for (k, &i) in self.indices.iter().enumerate() {
            v[(i, k)] = T::one();
        }
        v
    }
}

/// All `d1`-subsets of `{0,…,d2−1}` in lexicographic order.
pub fn combinations(d2: usize, d1: usize) -> Result<Vec<Combination>> {
    if d1 < 1 || d1 > d2 {
        return Err(Error::InvalidCombination(format!("need 1 <= d1 <= d2, got d1={d1}, d2={d2}")));
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..d1).collect();
    loop {
        out.push(Combination {
            d2,
            indices: idx.clone(),
        });
        let mut k = d1;
        while k > 0 && idx[k - 1] == d2 - d1 + k - 1 {
            k -= 1;
        }
        if k == 0 {
            return Ok(out);
        }
        idx[k - 1] += 1;
        for t in k..d1 {
            idx[t] = idx[t - 1] + 1;
        }
    }
}

/// Projector `P_c` onto the span of the selected basis vectors.
pub fn embedding_operator<T: Real>(c: &Combination) -> Matrix<T> {
    let mut p = Matrix::zeros(c.d2(), c.d2());
    for &i in c.indices() {
        p[(i, i)] = crate::scalar::cone();
    }
    p
}
