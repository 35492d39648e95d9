//! Fusion frames stored as explicit blocks of orthonormal columns, their
//! verification (tightness, equichordality, equi-isoclinicity), subspace
//! distances, the two complement operations, direct sums, realification,
//! and several hand-built constructions.

use crate::designs::Bibd;
use crate::error::FrameError;
use crate::tol::{TOL_ORTH, TOL_REAL};
use crate::triples::ParamTriple;
use crate::Field;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type Result<T> = std::result::Result<T, FrameError>;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// A sequence of equal-rank subspaces of C^dim, each given by a matrix
/// whose orthonormal columns span it.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionFrame {
    dim: usize,
    blocks: Vec<DMatrix<Complex64>>,
    field: Field,
}

/// Squared principal-angle cosines for one subspace pair, largest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairAngles {
    pub i: usize,
    pub j: usize,
    pub cos2: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub dim: usize,
    pub num_blocks: usize,
    pub subspace_dim: usize,
    pub field: Field,
    pub tol: f64,
    /// tol scaled by the squared frame energy, the working threshold.
    pub effective_tol: f64,
    pub tight: bool,
    /// Frobenius distance of the projector sum from (NR/D) I.
    pub tight_residual: f64,
    pub equichordal: bool,
    pub equiisoclinic: bool,
    /// Pairwise projector-product trace forced by tightness + equal
    /// distances: R(NR-D)/(D(N-1)).
    pub trace_target: f64,
    /// Common squared cosine forced on equi-isoclinic pairs: (NR-D)/(D(N-1)).
    pub ei_cos2_target: f64,
    pub pair_trace_min: f64,
    pub pair_trace_max: f64,
    pub principal_angle_table: Vec<PairAngles>,
    pub max_imag: f64,
    /// Some pair of subspaces coincides (pair trace reaches R).
    pub repeated_subspaces: bool,
}

#[derive(Serialize, Deserialize)]
struct FrameJson {
    schema: String,
    dim: usize,
    n: usize,
    r: usize,
    field: Field,
    /// blocks[n][col][row] = [re, im]
    blocks: Vec<Vec<Vec<[f64; 2]>>>,
}

const FRAME_SCHEMA: &str = "ectff-frame/1";

impl FusionFrame {
    pub fn new(dim: usize, blocks: Vec<DMatrix<Complex64>>, field: Field) -> Result<Self> {
        if blocks.is_empty() {
            return Err(FrameError::TooFewBlocks { need: 1, got: 0 });
        }
        let r = blocks[0].ncols();
        for (index, b) in blocks.iter().enumerate() {
            if b.nrows() != dim || b.ncols() != r {
                return Err(FrameError::ShapeMismatch {
                    index,
                    rows: b.nrows(),
                    cols: b.ncols(),
                    exp_rows: dim,
                    exp_cols: r,
                });
            }
            let dev = (b.adjoint() * b - DMatrix::identity(r, r)).norm();
            if dev > TOL_ORTH * (r as f64).max(1.0) {
                return Err(FrameError::NonOrthonormal {
                    index,
                    deviation: dev,
                });
            }
        }
        let frame = FusionFrame { dim, blocks, field };
        if field == Field::Real {
            let mi = frame.max_imag();
            if mi > TOL_REAL {
                return Err(FrameError::NotReal { max_imag: mi });
            }
        }
        Ok(frame)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn subspace_dim(&self) -> usize {
        self.blocks[0].ncols()
    }

    pub fn blocks(&self) -> &[DMatrix<Complex64>] {
        &self.blocks
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn params(&self) -> ParamTriple {
        ParamTriple::new(
            self.dim as i128,
            self.num_blocks() as i128,
            self.subspace_dim() as i128,
        )
    }

    pub fn max_imag(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }

    /// All blocks side by side: dim x (n*r).
    pub fn synthesis(&self) -> DMatrix<Complex64> {
        let (n, r) = (self.num_blocks(), self.subspace_dim());
        let mut m = DMatrix::zeros(self.dim, n * r);
        for (k, b) in self.blocks.iter().enumerate() {
            m.view_mut((0, k * r), (self.dim, r)).copy_from(b);
        }
        m
    }

    pub fn projector(&self, i: usize) -> DMatrix<Complex64> {
        &self.blocks[i] * self.blocks[i].adjoint()
    }

    pub fn cross_gram(&self, i: usize, j: usize) -> DMatrix<Complex64> {
        self.blocks[i].adjoint() * &self.blocks[j]
    }

    /// Squared principal-angle cosines between subspaces i and j, descending.
    pub fn principal_angles(&self, i: usize, j: usize) -> Vec<f64> {
        self.cross_gram(i, j)
            .svd(false, false)
            .singular_values
            .iter()
            .map(|s| (s * s).clamp(0.0, 1.0))
            .collect()
    }

    /// Chordal distance (1/sqrt 2) ||P_i - P_j||_F.
    pub fn chordal_distance(&self, i: usize, j: usize) -> f64 {
        let tr: f64 = self.cross_gram(i, j).iter().map(|z| z.norm_sqr()).sum();
        (self.subspace_dim() as f64 - tr).max(0.0).sqrt()
    }

    /// Spectral distance sqrt(1 - ||P_i P_j||_2^2).
    pub fn spectral_distance(&self, i: usize, j: usize) -> f64 {
        let top = self
            .cross_gram(i, j)
            .svd(false, false)
            .singular_values
            .max();
        (1.0 - (top * top).clamp(0.0, 1.0)).max(0.0).sqrt()
    }

    pub fn verify(&self, tol: f64) -> VerificationReport {
        let (d, n, r) = (self.dim, self.num_blocks(), self.subspace_dim());
        let energy: f64 = self.blocks.iter().map(|b| b.norm_squared()).sum();
        let effective_tol = tol * energy.max(1.0);

        let constant = (n * r) as f64 / d as f64;
        let mut sum = DMatrix::<Complex64>::zeros(d, d);
        for i in 0..n {
            sum += self.projector(i);
        }
        for k in 0..d {
            sum[(k, k)] -= Complex64::new(constant, 0.0);
        }
        let tight_residual = sum.norm();
        let tight = tight_residual <= effective_tol * (d as f64).sqrt();

        let trace_target = if n > 1 {
            (r * (n * r - d)) as f64 / (d * (n - 1)) as f64
        } else {
            0.0
        };
        let ei_cos2_target = if n > 1 {
            (n * r - d) as f64 / (d * (n - 1)) as f64
        } else {
            0.0
        };

        let mut principal_angle_table = Vec::with_capacity(n * (n - 1) / 2);
        let mut pair_trace_min = f64::INFINITY;
        let mut pair_trace_max = f64::NEG_INFINITY;
        let mut all_isoclinic = true;
        let mut repeated_subspaces = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let cos2 = self.principal_angles(i, j);
                let trace: f64 = cos2.iter().sum();
                pair_trace_min = pair_trace_min.min(trace);
                pair_trace_max = pair_trace_max.max(trace);
                if cos2
                    .iter()
                    .any(|c| (c - ei_cos2_target).abs() > effective_tol)
                {
                    all_isoclinic = false;
                }
                if trace >= r as f64 - effective_tol {
                    repeated_subspaces = true;
                }
                principal_angle_table.push(PairAngles { i, j, cos2 });
            }
        }
        if n == 1 {
            pair_trace_min = 0.0;
            pair_trace_max = 0.0;
        }

        let equichordal = tight && (pair_trace_max - pair_trace_min) <= effective_tol;
        let equiisoclinic = tight && all_isoclinic;

        VerificationReport {
            dim: d,
            num_blocks: n,
            subspace_dim: r,
            field: self.field,
            tol,
            effective_tol,
            tight,
            tight_residual,
            equichordal,
            equiisoclinic,
            trace_target,
            ei_cos2_target,
            pair_trace_min,
            pair_trace_max,
            principal_angle_table,
            max_imag: self.max_imag(),
            repeated_subspaces,
        }
    }

    fn require_tight(&self) -> Result<()> {
        let rep = self.verify(crate::tol::DEFAULT_VERIFY_TOL);
        if !rep.tight {
            return Err(FrameError::NotTight {
                residual: rep.tight_residual,
            });
        }
        Ok(())
    }

    /// Complementary tight fusion frame on C^(NR-D): blocks of a frame
    /// whose synthesis Gram is the complement of this one's.
    pub fn naimark_complement(&self) -> Result<FusionFrame> {
        let (d, n, r) = (self.dim, self.num_blocks(), self.subspace_dim());
        if n * r <= d {
            return Err(FrameError::NoNaimarkComplement);
        }
        self.require_tight()?;
        let nr = n * r;
        let dd = nr - d;
        let phi = self.synthesis();
        let scale = Complex64::new(d as f64 / nr as f64, 0.0);
        let mut ghat = DMatrix::<Complex64>::identity(nr, nr) - phi.adjoint() * &phi * scale;
        // enforce exact hermitianness before the eigensolve
        let ghat_adj = ghat.adjoint();
        ghat = (ghat + ghat_adj) * Complex64::new(0.5, 0.0);
        let w = unit_eigenbasis(&ghat, dd)?;
        let amp = Complex64::new((nr as f64 / dd as f64).sqrt(), 0.0);
        let psi = w.adjoint() * amp;
        let blocks = (0..n)
            .map(|k| psi.view((0, k * r), (dd, r)).into_owned())
            .collect();
        FusionFrame::new(dd, blocks, Field::Complex)
    }

    /// Orthocomplements each subspace within the same ambient space.
    pub fn spatial_complement(&self) -> Result<FusionFrame> {
        let (d, r) = (self.dim, self.subspace_dim());
        if r >= d {
            return Err(FrameError::NoSpatialComplement);
        }
        self.require_tight()?;
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let p = b * b.adjoint();
                // kernel of the projector = eigenvalue-0 eigenvectors
                let flipped = DMatrix::<Complex64>::identity(d, d) - p;
                unit_eigenbasis(&flipped, d - r)
            })
            .collect::<Result<Vec<_>>>()?;
        FusionFrame::new(d, blocks, Field::Complex)
    }

    /// Blockwise diagonal sum; requires equal block counts and equal R/D
    /// ratio so the tight constants agree.
    pub fn direct_sum(&self, other: &FusionFrame) -> Result<FusionFrame> {
        let (d1, n1, r1) = (self.dim, self.num_blocks(), self.subspace_dim());
        let (d2, n2, r2) = (other.dim, other.num_blocks(), other.subspace_dim());
        if n1 != n2 {
            return Err(FrameError::BlockCountMismatch(n1, n2));
        }
        if d1 * r2 != d2 * r1 {
            return Err(FrameError::RatioMismatch { d1, r1, d2, r2 });
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                let mut m = DMatrix::zeros(d1 + d2, r1 + r2);
                m.view_mut((0, 0), (d1, r1)).copy_from(a);
                m.view_mut((d1, r1), (d2, r2)).copy_from(b);
                m
            })
            .collect();
        let field = if self.field == Field::Real && other.field == Field::Real {
            Field::Real
        } else {
            Field::Complex
        };
        FusionFrame::new(d1 + d2, blocks, field)
    }

    /// Realification: C^D -> R^2D doubles both the dimension and the rank
    /// and preserves all principal angles (each with doubled multiplicity).
    pub fn realify(&self) -> Result<FusionFrame> {
        let (d, r) = (self.dim, self.subspace_dim());
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                DMatrix::from_fn(2 * d, 2 * r, |i, j| {
                    let z = b[(i % d, j % r)];
                    let v = match (i >= d, j >= r) {
                        (false, false) => z.re,
                        (true, true) => z.re,
                        (true, false) => z.im,
                        (false, true) => -z.im,
                    };
                    Complex64::new(v, 0.0)
                })
            })
            .collect();
        FusionFrame::new(2 * d, blocks, Field::Real)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.as_dto()).expect("frame serialization cannot fail")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.as_dto()).expect("frame serialization cannot fail")
    }

    fn as_dto(&self) -> FrameJson {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                (0..b.ncols())
                    .map(|j| {
                        (0..b.nrows())
                            .map(|i| [b[(i, j)].re, b[(i, j)].im])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FrameJson {
            schema: FRAME_SCHEMA.to_string(),
            dim: self.dim,
            n: self.num_blocks(),
            r: self.subspace_dim(),
            field: self.field,
            blocks,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dto: FrameJson =
            serde_json::from_str(text).map_err(|e| FrameError::Json(e.to_string()))?;
        if dto.schema != FRAME_SCHEMA {
            return Err(FrameError::Json(format!(
                "unsupported schema {:?} (expected {FRAME_SCHEMA:?})",
                dto.schema
            )));
        }
        if dto.blocks.len() != dto.n {
            return Err(FrameError::Json(format!(
                "block count {} disagrees with n = {}",
                dto.blocks.len(),
                dto.n
            )));
        }
        let blocks = dto
            .blocks
            .iter()
            .enumerate()
            .map(|(index, cols)| {
                if cols.len() != dto.r || cols.iter().any(|c| c.len() != dto.dim) {
                    return Err(FrameError::ShapeMismatch {
                        index,
                        rows: cols.first().map_or(0, |c| c.len()),
                        cols: cols.len(),
                        exp_rows: dto.dim,
                        exp_cols: dto.r,
                    });
                }
                Ok(DMatrix::from_fn(dto.dim, dto.r, |i, j| {
                    Complex64::new(cols[j][i][0], cols[j][i][1])
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        FusionFrame::new(dto.dim, blocks, dto.field)
    }
}

/// Orthonormal basis (as matrix columns) of the eigenvalue-1 eigenspace of
/// a Hermitian 0/1-spectrum matrix, with deterministic ordering and phase.
fn unit_eigenbasis(m: &DMatrix<Complex64>, expected: usize) -> Result<DMatrix<Complex64>> {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("eigenvalues of a Hermitian matrix are finite")
    });
    let kept: Vec<usize> = order
        .into_iter()
        .filter(|&i| eig.eigenvalues[i] > 0.5)
        .collect();
    if kept.len() != expected {
        return Err(FrameError::NumericalRank {
            expected,
            got: kept.len(),
        });
    }
    let rows = m.nrows();
    let mut w = DMatrix::zeros(rows, expected);
    for (col, &i) in kept.iter().enumerate() {
        let mut v: DVector<Complex64> = eig.eigenvectors.column(i).into_owned();
        if let Some(lead) = v.iter().find(|z| z.norm() > 1e-8) {
            let phase = lead.conj() / lead.norm();
            v *= phase;
        }
        w.set_column(col, &v);
    }
    Ok(w)
}

/// Sorts two squared-cosine lists descending, zero-pads the shorter, and
/// compares entrywise. Complements keep every nonzero principal angle.
pub fn angles_match_padded(a: &[f64], b: &[f64], tol: f64) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| y.partial_cmp(x).unwrap());
    b.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let len = a.len().max(b.len());
    a.resize(len, 0.0);
    b.resize(len, 0.0);
    a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
}

fn check_positive(t: ParamTriple) -> Result<(usize, usize, usize)> {
    if t.d < 1 || t.n < 1 || t.r < 1 || t.d > 4096 || t.n > 4096 || t.r > 4096 {
        return Err(FrameError::NotTrivialShape {
            d: t.d,
            n: t.n,
            r: t.r,
        });
    }
    Ok((t.d as usize, t.n as usize, t.r as usize))
}

/// The two shapes every dimension count admits: R = D (all blocks the whole
/// space) and D = NR (blocks partition the coordinates).
pub fn construct_trivial(t: ParamTriple) -> Result<FusionFrame> {
    let (d, n, r) = check_positive(t)?;
    if r == d {
        let blocks = (0..n).map(|_| DMatrix::identity(d, d)).collect();
        return FusionFrame::new(d, blocks, Field::Real);
    }
    if n * r == d {
        let blocks = (0..n)
            .map(|k| DMatrix::from_fn(d, r, |i, j| if i == k * r + j { C1 } else { C0 }))
            .collect();
        return FusionFrame::new(d, blocks, Field::Real);
    }
    Err(FrameError::NotTrivialShape {
        d: t.d,
        n: t.n,
        r: t.r,
    })
}

/// Four R-dimensional subspaces of a 2R-dimensional space with every pair
/// isoclinic at squared cosine 1/3. The rotation U satisfies U + U^H = -I;
/// over the reals that forces 2x2 rotation blocks, hence even R.
pub fn construct_2r_4_r(r: usize, field: Field) -> Result<FusionFrame> {
    if r == 0 {
        return Err(FrameError::NotTrivialShape { d: 0, n: 4, r: 0 });
    }
    let u: DMatrix<Complex64> = match field {
        Field::Complex => {
            let omega = Complex64::from_polar(1.0, std::f64::consts::TAU / 3.0);
            DMatrix::from_diagonal_element(r, r, omega)
        }
        Field::Real => {
            if r % 2 != 0 {
                return Err(FrameError::OddRealR(r as u32));
            }
            let (c, s) = (-0.5, 3f64.sqrt() / 2.0);
            DMatrix::from_fn(r, r, |i, j| {
                if i / 2 != j / 2 {
                    return C0;
                }
                let v = match (i % 2, j % 2) {
                    (0, 0) | (1, 1) => c,
                    (0, 1) => -s,
                    _ => s,
                };
                Complex64::new(v, 0.0)
            })
        }
    };
    let id = DMatrix::<Complex64>::identity(r, r);
    let a = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    let b = Complex64::new((2f64 / 3.0).sqrt(), 0.0);
    let stack = |top: DMatrix<Complex64>, bottom: DMatrix<Complex64>| {
        let mut m = DMatrix::zeros(2 * r, r);
        m.view_mut((0, 0), (r, r)).copy_from(&top);
        m.view_mut((r, 0), (r, r)).copy_from(&bottom);
        m
    };
    let blocks = vec![
        stack(id.clone(), DMatrix::zeros(r, r)),
        stack(&id * a, &id * b),
        stack(&id * a, &u * b),
        stack(&id * a, (&id + &u) * -b),
    ];
    FusionFrame::new(2 * r, blocks, field)
}

/// One subspace per design point, spanned by the standard coordinates of
/// the blocks through that point: an equichordal TFF(b, v, replication)
/// that is never equi-isoclinic (each pair meets in a lambda-dimensional
/// subspace and is orthogonal across the rest).
pub fn construct_zauner(design: &Bibd) -> Result<FusionFrame> {
    let (_, lambda) = design
        .verify()
        .map_err(|e| FrameError::Json(e.to_string()))?;
    let _ = lambda;
    let b = design.blocks.len();
    let v = design.v as usize;
    let mut per_point: Vec<Vec<usize>> = vec![Vec::new(); v];
    for (bi, block) in design.blocks.iter().enumerate() {
        for &p in block {
            per_point[p].push(bi);
        }
    }
    let r = per_point[0].len();
    debug_assert!(
        per_point.iter().all(|l| l.len() == r),
        "pair balance forces replication"
    );
    let blocks = per_point
        .into_iter()
        .map(|list| DMatrix::from_fn(b, r, |i, j| if i == list[j] { C1 } else { C0 }))
        .collect();
    FusionFrame::new(b, blocks, Field::Real)
}

/// A tight but deliberately degenerate TFF(2R, 4, R): two copies each of
/// the even- and odd-coordinate subspaces. Not equichordal; witnesses that
/// tightness alone is attainable at this shape.
pub fn construct_f0_witness(r: usize) -> Result<FusionFrame> {
    if r == 0 {
        return Err(FrameError::NotTrivialShape { d: 0, n: 4, r: 0 });
    }
    let d = 2 * r;
    let even = DMatrix::from_fn(d, r, |i, j| if i == 2 * j { C1 } else { C0 });
    let odd = DMatrix::from_fn(d, r, |i, j| if i == 2 * j + 1 { C1 } else { C0 });
    FusionFrame::new(d, vec![even.clone(), even, odd.clone(), odd], Field::Real)
}
