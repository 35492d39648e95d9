//! Combinatorial designs over finite abelian groups: difference families,
//! divisible difference sets, and balanced incomplete block designs.

use crate::error::DesignError;
use crate::groups::{AbelianGroup, GroupElement, Subgroup};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

type Result<T> = std::result::Result<T, DesignError>;

/// Largest group order the difference-family search accepts.
pub const SEARCH_CAP: u64 = 64;

/// Blocks of equal size whose internal differences cover every nonzero
/// group element the same number of times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceFamily {
    group: AbelianGroup,
    blocks: Vec<Vec<usize>>,
    lambda: u64,
}

/// Structural checks shared by the family and set verifiers: equal sizes,
/// no repeats, indices in range. Returns the common block size.
fn check_blocks(group: &AbelianGroup, blocks: &[Vec<usize>]) -> Result<usize> {
    let Some(first) = blocks.first() else {
        return Err(DesignError::EmptyFamily);
    };
    let k = first.len();
    for block in blocks {
        if block.len() != k {
            return Err(DesignError::UnequalBlockSizes {
                first: k,
                other: block.len(),
            });
        }
        let mut sorted = block.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != block.len() {
            return Err(DesignError::RepeatedElement);
        }
        if sorted.last().is_some_and(|&e| e as u64 >= group.order()) {
            return Err(DesignError::Group(crate::error::GroupError::CoordRange {
                value: *sorted.last().unwrap() as u64,
                modulus: group.order(),
            }));
        }
    }
    if k < 2 {
        return Err(DesignError::BlockTooSmall(k));
    }
    Ok(k)
}

impl DifferenceFamily {
    /// Verifies the constant-difference-count condition. `Ok(None)` means
    /// the blocks are structurally sound but the counts are not constant.
    pub fn new(group: AbelianGroup, blocks: Vec<Vec<usize>>) -> Result<Option<Self>> {
        check_blocks(&group, &blocks)?;
        let mut counts = vec![0i64; group.order() as usize];
        for block in &blocks {
            for (g, c) in group.autocorrelation(block).into_iter().enumerate() {
                counts[g] += c;
            }
        }
        let lambda = counts[1];
        if counts[1..].iter().any(|&c| c != lambda) {
            return Ok(None);
        }
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Ok(Some(DifferenceFamily {
            group,
            blocks,
            lambda: lambda as u64,
        }))
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn v(&self) -> u64 {
        self.group.order()
    }

    pub fn k(&self) -> usize {
        self.blocks[0].len()
    }

    /// Number of blocks.
    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }
}

#[derive(Serialize, Deserialize)]
struct DfJson {
    group: String,
    blocks: Vec<Vec<Vec<u64>>>,
    lambda: u64,
}

impl Serialize for DifferenceFamily {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&e| self.group.element(e).0).collect())
            .collect();
        DfJson {
            group: self.group.literal(),
            blocks,
            lambda: self.lambda,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for DifferenceFamily {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = DfJson::deserialize(de)?;
        let group = AbelianGroup::parse(&raw.group).map_err(D::Error::custom)?;
        let blocks = raw
            .blocks
            .into_iter()
            .map(|b| {
                b.into_iter()
                    .map(|coords| group.index_of(&GroupElement(coords)))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let df = DifferenceFamily::new(group, blocks)
            .map_err(D::Error::custom)?
            .ok_or_else(|| D::Error::custom("difference counts are not constant"))?;
        if df.lambda != raw.lambda {
            return Err(D::Error::custom(format!(
                "stated lambda {} disagrees with the actual count {}",
                raw.lambda, df.lambda
            )));
        }
        Ok(df)
    }
}

/// A subset whose difference counts are constant on the nonzero part of a
/// designated subgroup and constant off it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisibleDifferenceSet {
    pub group: AbelianGroup,
    pub subgroup: Subgroup,
    pub set: Vec<usize>,
    pub lambda1: u64,
    pub lambda2: u64,
    /// |set|^2 = |group| * lambda2 with |set| != lambda1.
    pub semiregular: bool,
    /// lambda1 = 0: differences never fall in the subgroup.
    pub relative: bool,
}

/// Verifies the two-level difference-count condition against `subgroup`.
/// For the trivial subgroup the inner level is empty and lambda1 is 0 by
/// convention, which makes this an ordinary difference-set test.
pub fn verify_dds(
    group: &AbelianGroup,
    subgroup: &Subgroup,
    set: &[usize],
) -> Result<Option<DivisibleDifferenceSet>> {
    if set.is_empty() {
        return Err(DesignError::EmptySet);
    }
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != set.len() {
        return Err(DesignError::RepeatedElement);
    }
    if sorted.last().is_some_and(|&e| e as u64 >= group.order()) {
        return Err(DesignError::Group(crate::error::GroupError::CoordRange {
            value: *sorted.last().unwrap() as u64,
            modulus: group.order(),
        }));
    }
    let counts = group.autocorrelation(&sorted);
    let mut lambda1: Option<i64> = None;
    let mut lambda2: Option<i64> = None;
    for g in group.elements().skip(1) {
        let slot = if subgroup.contains(g) {
            &mut lambda1
        } else {
            &mut lambda2
        };
        match *slot {
            None => *slot = Some(counts[g]),
            Some(l) if l == counts[g] => {}
            Some(_) => return Ok(None),
        }
    }
    let d = sorted.len() as u64;
    let lambda1 = lambda1.unwrap_or(0) as u64;
    let lambda2 = lambda2.unwrap_or(0) as u64;
    let semiregular = d * d == group.order() * lambda2 && d != lambda1;
    Ok(Some(DivisibleDifferenceSet {
        group: group.clone(),
        subgroup: subgroup.clone(),
        set: sorted,
        lambda1,
        lambda2,
        semiregular,
        relative: lambda1 == 0,
    }))
}

/// Lex-least translate of `block` that contains 0; difference counts are
/// translation-invariant, so every family normalizes blockwise to this form.
fn canonical_translate(group: &AbelianGroup, block: &[usize]) -> Vec<usize> {
    block
        .iter()
        .map(|&b| {
            let mut t: Vec<usize> = block.iter().map(|&x| group.sub(x, b)).collect();
            t.sort_unstable();
            t
        })
        .min()
        .expect("blocks are nonempty")
}

/// Exhaustive search for difference families with the given block size and
/// count, canonical up to per-block translation and block order. Stops after
/// `limit` families when `limit` is nonzero.
pub fn search_df(
    group: &AbelianGroup,
    k: usize,
    lambda: u64,
    limit: usize,
) -> Result<Vec<DifferenceFamily>> {
    let v = group.order();
    if v > SEARCH_CAP {
        return Err(DesignError::SearchCap { v, cap: SEARCH_CAP });
    }
    if k < 2 {
        return Err(DesignError::BlockTooSmall(k));
    }
    if k as u64 > v {
        return Ok(Vec::new());
    }
    let kk = (k * (k - 1)) as u64;
    let num = lambda * (v - 1);
    if num % kk != 0 {
        return Err(DesignError::NonIntegralBlockCount {
            lambda,
            vm1: v - 1,
            kk,
        });
    }
    let num_blocks = (num / kk) as usize;

    // candidate blocks: canonical K-subsets whose own difference counts
    // already respect the lambda ceiling, in lex order
    let mut candidates: Vec<(Vec<usize>, Vec<i64>)> = Vec::new();
    let mut subset: Vec<usize> = Vec::with_capacity(k);
    subset.push(0);
    fn extend(
        group: &AbelianGroup,
        subset: &mut Vec<usize>,
        k: usize,
        lambda: i64,
        out: &mut Vec<(Vec<usize>, Vec<i64>)>,
    ) {
        if subset.len() == k {
            if canonical_translate(group, subset) == *subset {
                let counts = group.autocorrelation(subset);
                if counts.iter().skip(1).all(|&c| c <= lambda) {
                    out.push((subset.clone(), counts));
                }
            }
            return;
        }
        let start = subset.last().copied().unwrap_or(0) + 1;
        for next in start..group.order() as usize {
            subset.push(next);
            extend(group, subset, k, lambda, out);
            subset.pop();
        }
    }
    extend(group, &mut subset, k, lambda as i64, &mut candidates);

    let mut found = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(num_blocks);
    let mut counts = vec![0i64; v as usize];
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        group: &AbelianGroup,
        candidates: &[(Vec<usize>, Vec<i64>)],
        num_blocks: usize,
        lambda: i64,
        chosen: &mut Vec<usize>,
        counts: &mut [i64],
        found: &mut Vec<DifferenceFamily>,
        limit: usize,
    ) {
        if limit != 0 && found.len() >= limit {
            return;
        }
        if chosen.len() == num_blocks {
            // counts are pointwise <= lambda and total to lambda*(v-1),
            // so they are exactly lambda everywhere
            debug_assert!(counts.iter().skip(1).all(|&c| c == lambda));
            let blocks = chosen.iter().map(|&i| candidates[i].0.clone()).collect();
            let df = DifferenceFamily {
                group: group.clone(),
                blocks,
                lambda: lambda as u64,
            };
            found.push(df);
            return;
        }
        let start = chosen.last().copied().unwrap_or(0);
        for (i, (_, block_counts)) in candidates.iter().enumerate().skip(start) {
            let fits = counts
                .iter()
                .zip(block_counts)
                .skip(1)
                .all(|(&c, &b)| c + b <= lambda);
            if !fits {
                continue;
            }
            for (c, &b) in counts.iter_mut().zip(block_counts) {
                *c += b;
            }
            chosen.push(i);
            assemble(
                group, candidates, num_blocks, lambda, chosen, counts, found, limit,
            );
            chosen.pop();
            for (c, &b) in counts.iter_mut().zip(block_counts) {
                *c -= b;
            }
        }
    }
    assemble(
        group,
        &candidates,
        num_blocks,
        lambda as i64,
        &mut chosen,
        &mut counts,
        &mut found,
        limit,
    );
    Ok(found)
}

/// A block design on points {0, .., v-1}: every block the same size, every
/// unordered point pair covered the same number of times.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bibd {
    pub v: u64,
    pub blocks: Vec<Vec<usize>>,
}

impl Bibd {
    /// The complete design: all k-subsets of {0, .., v-1}.
    pub fn complete(v: u64, k: usize) -> Result<Self> {
        if k < 2 || k as u64 > v {
            return Err(DesignError::InvalidBibd(format!(
                "complete design needs 2 <= k <= v, got k={k}, v={v}"
            )));
        }
        let mut blocks = Vec::new();
        let mut cur: Vec<usize> = Vec::with_capacity(k);
        fn rec(v: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            let start = cur.last().map_or(0, |&x| x + 1);
            for next in start..v {
                cur.push(next);
                rec(v, k, cur, out);
                cur.pop();
            }
        }
        rec(v as usize, k, &mut cur, &mut blocks);
        Ok(Bibd { v, blocks })
    }

    pub fn b(&self) -> u64 {
        self.blocks.len() as u64
    }

    /// Checks the design conditions and returns (k, lambda).
    pub fn verify(&self) -> Result<(usize, u64)> {
        let Some(first) = self.blocks.first() else {
            return Err(DesignError::InvalidBibd("no blocks".into()));
        };
        let k = first.len();
        let v = self.v as usize;
        let mut pair_counts = vec![0u64; v * v];
        for block in &self.blocks {
            if block.len() != k {
                return Err(DesignError::UnequalBlockSizes {
                    first: k,
                    other: block.len(),
                });
            }
            let mut sorted = block.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != k {
                return Err(DesignError::RepeatedElement);
            }
            if sorted.last().is_some_and(|&p| p >= v) {
                return Err(DesignError::InvalidBibd(format!(
                    "point {} out of range for v={v}",
                    sorted.last().unwrap()
                )));
            }
            for (i, &p) in sorted.iter().enumerate() {
                for &q in &sorted[i + 1..] {
                    pair_counts[p * v + q] += 1;
                }
            }
        }
        let lambda = pair_counts[1];
        for p in 0..v {
            for q in (p + 1)..v {
                if pair_counts[p * v + q] != lambda {
                    return Err(DesignError::InvalidBibd(format!(
                        "pair ({p},{q}) covered {} times, pair (0,1) {} times",
                        pair_counts[p * v + q],
                        lambda
                    )));
                }
            }
        }
        if lambda == 0 {
            return Err(DesignError::InvalidBibd("no pair is covered".into()));
        }
        Ok((k, lambda))
    }
}
