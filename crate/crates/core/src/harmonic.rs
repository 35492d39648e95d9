//! Harmonic fusion frames: restrict the character table of a finite abelian
//! group G to a subset of rows, bundle the columns into blocks along the
//! cosets of an annihilator, and read the frame's geometry off the
//! combinatorics of the subset.
//!
//! With H <= G and a subset S of G whose intersections with the H-cosets
//! all have the same size, the unit columns phi_a(d) = |S|^(-1/2) gamma_a(d)
//! (d in S), grouped by the cosets of ann(H), form a tight fusion frame with
//! |H| blocks of rank |G|/|H| in dimension |S|. The frame is equichordal
//! exactly when the shifted coset pieces of S form a difference family for
//! H, and equi-isoclinic exactly when each piece is itself a difference set.
//! Both flags are computed combinatorially and then cross-checked against
//! the numerical verifier; any disagreement is reported as an error rather
//! than silently trusting either side.

use crate::designs::{DifferenceFamily, DivisibleDifferenceSet};
use crate::error::HarmonicError;
use crate::frames::FusionFrame;
use crate::groups::{AbelianGroup, Subgroup};
use crate::tol::{DEFAULT_VERIFY_TOL, TOL_GRAM};
use crate::Field;
use nalgebra::DMatrix;
use num_complex::Complex64;

type Result<T> = std::result::Result<T, HarmonicError>;

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSpec {
    group: AbelianGroup,
    subgroup: Subgroup,
    subset: Vec<usize>,
}

impl HarmonicSpec {
    pub fn new(group: AbelianGroup, subgroup: Subgroup, subset: Vec<usize>) -> Result<Self> {
        if *subgroup.parent() != group {
            return Err(HarmonicError::Group(
                crate::error::GroupError::MismatchedParents,
            ));
        }
        if subset.is_empty() {
            return Err(HarmonicError::EmptySubset);
        }
        let mut sorted = subset;
        sorted.sort_unstable();
        let before = sorted.len();
        sorted.dedup();
        if sorted.len() != before {
            return Err(HarmonicError::Design(
                crate::error::DesignError::RepeatedElement,
            ));
        }
        if sorted.last().is_some_and(|&e| e as u64 >= group.order()) {
            return Err(HarmonicError::Group(crate::error::GroupError::CoordRange {
                value: *sorted.last().unwrap() as u64,
                modulus: group.order(),
            }));
        }
        Ok(HarmonicSpec {
            group,
            subgroup,
            subset: sorted,
        })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    fn fmt_element(&self, idx: usize) -> String {
        let coords = self.group.element(idx).0;
        let inner = coords
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        format!("({inner})")
    }

    pub fn build(self) -> Result<HarmonicResult> {
        let g_order = self.group.order();
        let h_order = self.subgroup.order();
        let d = self.subset.len();

        // pieces of the subset along the H-cosets, shifted back into H
        let raw_parts = self.subgroup.partition(&self.subset);
        let lightest = raw_parts.iter().min_by_key(|(_, m)| m.len()).unwrap();
        let heaviest = raw_parts.iter().max_by_key(|(_, m)| m.len()).unwrap();
        if lightest.1.len() != heaviest.1.len() {
            return Err(HarmonicError::NonConstantCosetCardinality {
                rep_a: self.fmt_element(heaviest.0),
                card_a: heaviest.1.len(),
                rep_b: self.fmt_element(lightest.0),
                card_b: lightest.1.len(),
            });
        }
        let constant_card = lightest.1.len();
        debug_assert_eq!(constant_card as u64 * (g_order / h_order), d as u64);
        let parts: Vec<(usize, Vec<usize>)> = raw_parts
            .into_iter()
            .map(|(rep, members)| {
                let mut shifted: Vec<usize> =
                    members.iter().map(|&m| self.group.sub(m, rep)).collect();
                shifted.sort_unstable();
                debug_assert!(shifted.iter().all(|&s| self.subgroup.contains(s)));
                (rep, shifted)
            })
            .collect();

        // difference-family flag: summed difference counts, restricted to
        // the nonzero part of H, must be constant
        let mut summed = vec![0i64; g_order as usize];
        let mut is_ds_each = true;
        for (_, piece) in &parts {
            let counts = self.group.autocorrelation(piece);
            let mut inner = self.subgroup.elements().iter().filter(|&&h| h != 0);
            if let Some(&&first) = inner.next().as_ref() {
                if inner.any(|&h| counts[h] != counts[first]) {
                    is_ds_each = false;
                }
            }
            for (slot, c) in summed.iter_mut().zip(&counts) {
                *slot += c;
            }
        }
        let mut lambdas = self
            .subgroup
            .elements()
            .iter()
            .filter(|&&h| h != 0)
            .map(|&h| summed[h]);
        let lambda = lambdas.next().unwrap_or(0);
        let is_df = lambdas.all(|l| l == lambda);
        if !is_df {
            is_ds_each = false;
        }

        // columns: characters, one block per coset of ann(H)
        let ann = self.subgroup.annihilator();
        let column_cosets = ann.cosets();
        let block_reps: Vec<usize> = column_cosets.iter().map(|c| c[0]).collect();
        let scale = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        let blocks = column_cosets
            .iter()
            .map(|coset| {
                DMatrix::from_fn(d, coset.len(), |row, col| {
                    self.group.character_value(coset[col], self.subset[row]) * scale
                })
            })
            .collect();
        let frame = FusionFrame::new(d, blocks, Field::Complex)?;
        let (fr, fd) = (frame.subspace_dim(), frame.dim());
        let trivial = fr == fd || frame.num_blocks() * fr == fd;

        // the numerical verifier must agree with the combinatorics
        let report = frame.verify(DEFAULT_VERIFY_TOL);
        if !report.tight {
            return Err(HarmonicError::FlagDisagreement {
                flag: "tight",
                combinatorial: true,
                numerical: false,
            });
        }
        if report.equichordal != is_df {
            return Err(HarmonicError::FlagDisagreement {
                flag: "equichordal",
                combinatorial: is_df,
                numerical: report.equichordal,
            });
        }
        if report.equiisoclinic != is_ds_each {
            return Err(HarmonicError::FlagDisagreement {
                flag: "equiisoclinic",
                combinatorial: is_ds_each,
                numerical: report.equiisoclinic,
            });
        }

        // present the pieces as a difference family over H on its own when
        // H has a natural standalone form
        let df = if is_df && constant_card >= 2 {
            self.subgroup.as_group().and_then(|(hg, map)| {
                let back: std::collections::HashMap<usize, usize> = map
                    .iter()
                    .enumerate()
                    .map(|(new, &old)| (old, new))
                    .collect();
                let blocks: Option<Vec<Vec<usize>>> = parts
                    .iter()
                    .map(|(_, piece)| {
                        piece
                            .iter()
                            .map(|p| back.get(p).copied())
                            .collect::<Option<Vec<_>>>()
                    })
                    .collect();
                blocks.and_then(|b| DifferenceFamily::new(hg, b).ok().flatten())
            })
        } else {
            None
        };

        Ok(HarmonicResult {
            frame,
            constant_card,
            is_df,
            is_ds_each,
            df,
            trivial,
            spec: self,
            block_reps,
            parts,
        })
    }
}

#[derive(Debug, Clone)]
pub struct HarmonicResult {
    pub frame: FusionFrame,
    /// |S intersect (g+H)|, the same for every coset.
    pub constant_card: usize,
    /// The shifted pieces form a difference family for H (equichordality).
    pub is_df: bool,
    /// Every piece is a difference set in H (equi-isoclinicity).
    pub is_ds_each: bool,
    /// The pieces as a difference family over H presented standalone, when
    /// H has a natural presentation and the pieces are big enough to carry
    /// one.
    pub df: Option<DifferenceFamily>,
    pub trivial: bool,
    spec: HarmonicSpec,
    block_reps: Vec<usize>,
    parts: Vec<(usize, Vec<usize>)>,
}

impl HarmonicResult {
    pub fn spec(&self) -> &HarmonicSpec {
        &self.spec
    }

    /// Representatives of the H-cosets indexing the cross-gram eigenvalues.
    pub fn spectrum_index(&self) -> Vec<usize> {
        self.parts.iter().map(|(rep, _)| *rep).collect()
    }

    /// Eigenvalues of the (normal) cross-gram between blocks i and j:
    /// lambda_(g+H) = (G/(D|H|)) gamma_c(g) sum_{h in S_g} gamma_c(h) with
    /// c the difference of the block representatives. Invariant under the
    /// choice of representatives.
    pub fn cross_gram_spectrum(&self, i: usize, j: usize) -> Vec<Complex64> {
        let g = self.spec.group();
        let c = g.sub(self.block_reps[j], self.block_reps[i]);
        let scale =
            g.order() as f64 / (self.frame.dim() as f64 * self.spec.subgroup.order() as f64);
        self.parts
            .iter()
            .map(|(rep, piece)| {
                let s: Complex64 = piece.iter().map(|&h| g.character_value(c, h)).sum();
                g.character_value(c, *rep) * s * scale
            })
            .collect()
    }
}

/// Gram matrix of the full set of unit character columns restricted to
/// `subset`: entry (a,b) = (1/|subset|) sum_d conj(gamma_a(d)) gamma_b(d).
pub fn character_gram(group: &AbelianGroup, subset: &[usize]) -> DMatrix<Complex64> {
    let n = group.order() as usize;
    let scale = Complex64::new(1.0 / subset.len() as f64, 0.0);
    DMatrix::from_fn(n, n, |a, b| {
        subset
            .iter()
            .map(|&d| group.character_value(a, d).conj() * group.character_value(b, d))
            .sum::<Complex64>()
            * scale
    })
}

/// The standard recipe turning a difference family over V with R blocks of
/// size K into a harmonic frame: work in G = V + Z_R with H = V x {0} and
/// take the subset assembling block r on level r. Yields dimensions
/// (K*R, |V|, R).
pub fn from_df(df: &DifferenceFamily) -> Result<HarmonicResult> {
    let mut moduli = df.group().moduli().to_vec();
    let r = df.r() as u64;
    moduli.push(r);
    let big = AbelianGroup::new(moduli)?;
    let h_elems: Vec<usize> = (0..df.group().order() as usize)
        .map(|x| x * r as usize)
        .collect();
    let h = Subgroup::from_elements(&big, h_elems)?;
    let mut subset = Vec::with_capacity(df.k() * df.r());
    for (level, block) in df.blocks().iter().enumerate() {
        for &e in block {
            subset.push(e * r as usize + level);
        }
    }
    let result = HarmonicSpec::new(big, h, subset)?.build()?;
    debug_assert!(result.is_df);
    Ok(result)
}

/// King's route: a semiregular divisible difference set over H <= G feeds
/// the harmonic construction directly, giving an equichordal TFF with |H|
/// blocks of rank |G|/|H| in dimension |set|. The semiregularity is what
/// forces the coset cardinalities (and off-annihilator character moduli)
/// to be constant, so both are checked here.
pub fn dds_to_ectff(dds: &DivisibleDifferenceSet) -> Result<HarmonicResult> {
    if !dds.semiregular {
        return Err(HarmonicError::NotSemiregular);
    }
    let hat = dds.group.dft(&dds.group.indicator(&dds.set))?;
    let ann = dds.subgroup.annihilator();
    let expected = dds.set.len() as f64 - dds.lambda1 as f64;
    for a in dds.group.elements() {
        if ann.contains(a) {
            continue;
        }
        let got = hat[a].norm_sqr();
        if (got - expected).abs() > TOL_GRAM * (dds.group.order() as f64) {
            return Err(HarmonicError::NonConstantModulus { expected, got });
        }
    }
    HarmonicSpec::new(dds.group.clone(), dds.subgroup.clone(), dds.set.clone())?.build()
}
