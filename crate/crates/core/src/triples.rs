//! Exact integer algebra on parameter triples (D,N,R): the quadratic
//! invariant, the two complement involutions, alternating complement
//! sequences, orbit classification, minimal points, and existence tests.
//!
//! No floating point anywhere in this module; every product is checked.

use crate::error::TripleError;
use crate::Field;
use serde::{Deserialize, Serialize};

type Result<T> = std::result::Result<T, TripleError>;

/// Walk cap: the minimal-point search provably terminates long before this;
/// reaching it is reported as an internal error rather than looping.
pub const DEFAULT_WALK_CAP: u32 = 64;

/// An integer parameter triple. Orbits legitimately pass through nonpositive
/// D and R, so the type imposes no positivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParamTriple {
    pub d: i128,
    pub n: i128,
    pub r: i128,
}

impl ParamTriple {
    pub const fn new(d: i128, n: i128, r: i128) -> Self {
        ParamTriple { d, n, r }
    }

    /// f(D,N,R) = DNR - D^2 - NR^2, the quantity fixed by both involutions.
    pub fn invariant(&self) -> Result<i128> {
        let dnr = mul(mul(self.d, self.n)?, self.r)?;
        let d2 = mul(self.d, self.d)?;
        let nr2 = mul(self.n, mul(self.r, self.r)?)?;
        sub(sub(dnr, d2)?, nr2)
    }

    /// nu(D,N,R) = (NR-D, N, R).
    pub fn naimark(&self) -> Result<ParamTriple> {
        Ok(ParamTriple::new(
            sub(mul(self.n, self.r)?, self.d)?,
            self.n,
            self.r,
        ))
    }

    /// sigma(D,N,R) = (D, N, D-R).
    pub fn spatial(&self) -> Result<ParamTriple> {
        Ok(ParamTriple::new(self.d, self.n, sub(self.d, self.r)?))
    }

    pub fn is_positive(&self) -> bool {
        self.d >= 1 && self.r >= 1
    }

    /// Minimality: 0 < D <= NR-D and 0 < R <= D-R.
    pub fn is_minimal(&self) -> Result<bool> {
        Ok(self.is_positive() && mul(2, self.d)? <= mul(self.n, self.r)? && 2 * self.r <= self.d)
    }

    fn query_ok(&self) -> Result<()> {
        if self.n < 2 {
            return Err(TripleError::InvalidQuery {
                d: self.d,
                n: self.n,
                r: self.r,
                reason: "N must be at least 2",
            });
        }
        if self.d < 1 || self.r < 1 {
            return Err(TripleError::InvalidQuery {
                d: self.d,
                n: self.n,
                r: self.r,
                reason: "D and R must be positive",
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for ParamTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.d, self.n, self.r)
    }
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(TripleError::Overflow)
}

fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(TripleError::Overflow)
}

/// One complement move in a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    Naimark,
    Spatial,
}

impl Move {
    pub fn apply(self, t: ParamTriple) -> Result<ParamTriple> {
        match self {
            Move::Naimark => t.naimark(),
            Move::Spatial => t.spatial(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrbitTag {
    SmallN2,
    SmallN3,
    FZero,
    FNegTrivialSeed,
    FNegNoTFF,
    FPos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClass {
    pub tag: OrbitTag,
    pub minimal_point: Option<ParamTriple>,
    /// The members actually enumerated: the closed cycle for N=2,3, the
    /// walked path from the minimal point (or trivial seed) to the query
    /// otherwise.
    pub orbit_sample: Vec<ParamTriple>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceVerdict {
    pub exists: bool,
    pub seed: Option<ParamTriple>,
    /// Complement moves replaying seed -> query; no-op moves at fixed
    /// points are skipped.
    pub chain: Vec<Move>,
}

/// The alternating complement sequence around an anchor: index 0 is the
/// anchor, the move on the edge between indices j and j+1 is Naimark for
/// even j and spatial for odd j. Returned in ascending index order.
pub fn sequence(t: ParamTriple, k_min: i32, k_max: i32) -> Result<Vec<ParamTriple>> {
    if k_min > 0 || k_max < 0 {
        return Err(TripleError::InvalidQuery {
            d: t.d,
            n: t.n,
            r: t.r,
            reason: "window must satisfy k_min <= 0 <= k_max",
        });
    }
    let mut down = Vec::with_capacity((-k_min) as usize);
    let mut cur = t;
    for step in 0..(-k_min) {
        // moving from index -step to -step-1
        let mv = if step % 2 == 0 {
            Move::Spatial
        } else {
            Move::Naimark
        };
        cur = mv.apply(cur)?;
        down.push(cur);
    }
    down.reverse();
    let mut out = down;
    out.push(t);
    cur = t;
    for step in 0..k_max {
        let mv = if step % 2 == 0 {
            Move::Naimark
        } else {
            Move::Spatial
        };
        cur = mv.apply(cur)?;
        out.push(cur);
    }
    Ok(out)
}

/// Direction of a walk step relative to the anchor.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Dir {
    Up,
    Down,
}

fn step_move(dir: Dir, step: u32) -> Move {
    match (dir, step % 2) {
        (Dir::Up, 0) => Move::Naimark,
        (Dir::Up, _) => Move::Spatial,
        (Dir::Down, 0) => Move::Spatial,
        (Dir::Down, _) => Move::Naimark,
    }
}

/// Walks from `t` (positive, N >= 4) toward the entrywise-least positive
/// orbit point, recording the moves taken. For f >= 0 the walk stops at the
/// unique minimal point; for f < 0 it stops on the last positive triple.
fn walk_inward(t: ParamTriple, cap: u32) -> Result<(ParamTriple, Vec<Move>)> {
    let f = t.invariant()?;
    let mut cur = t;
    let mut moves = Vec::new();
    for step in 0..=cap {
        if f >= 0 && cur.is_minimal()? {
            return Ok((cur, moves));
        }
        // Exactly one involution decreases a positive non-minimal triple:
        // nu when 2D > NR, sigma when 2D < NR (2D = NR only at minimality).
        let dir = if moves.is_empty() {
            if mul(2, cur.d)? > mul(cur.n, cur.r)? {
                Dir::Up
            } else {
                Dir::Down
            }
        } else if matches!(moves[0], Move::Naimark) {
            Dir::Up
        } else {
            Dir::Down
        };
        let mv = step_move(dir, step);
        let next = mv.apply(cur)?;
        if f < 0 && !next.is_positive() {
            return Ok((cur, moves));
        }
        debug_assert!(
            next.d <= cur.d && next.r <= cur.r,
            "inward walk must not grow"
        );
        moves.push(mv);
        cur = next;
    }
    Err(TripleError::WalkCap { cap })
}

/// Replays `moves` in reverse from `seed`, dropping no-op moves at fixed
/// points, and returns (chain, visited path seed..=query).
fn replay(seed: ParamTriple, moves: &[Move]) -> Result<(Vec<Move>, Vec<ParamTriple>)> {
    let mut chain = Vec::with_capacity(moves.len());
    let mut path = vec![seed];
    let mut cur = seed;
    for &mv in moves.iter().rev() {
        let next = mv.apply(cur)?;
        if next == cur {
            continue;
        }
        chain.push(mv);
        path.push(next);
        cur = next;
    }
    Ok((chain, path))
}

/// Closed-form data for N in {2,3}: the trivial seed and the chain from it,
/// when a TFF exists at all.
fn small_n_seed(t: ParamTriple) -> Option<(ParamTriple, Vec<Move>)> {
    let ParamTriple { d, n, r } = t;
    if n == 2 {
        // Exists iff R in {D/2, D}; both shapes are themselves trivial.
        if 2 * r == d || r == d {
            return Some((t, vec![]));
        }
        return None;
    }
    debug_assert_eq!(n, 3);
    if 3 * r == d || r == d {
        Some((t, vec![]))
    } else if 2 * r == d {
        // (D,3,D/2) is the Naimark complement of the trivial (D/2,3,D/2).
        Some((ParamTriple::new(r, 3, r), vec![Move::Naimark]))
    } else if 3 * r == 2 * d {
        // (D,3,2D/3) is the spatial complement of the trivial (D,3,D/3).
        Some((ParamTriple::new(d, 3, d / 3), vec![Move::Spatial]))
    } else {
        None
    }
}

/// Enumerates the finite closed cycle for N in {2,3} by iterating up-moves
/// until the (triple, parity) state repeats; triples in first-visit order.
fn small_n_cycle(t: ParamTriple) -> Result<Vec<ParamTriple>> {
    let mut cycle = vec![t];
    let mut cur = t;
    let mut parity = 0u8;
    for _ in 0..30 {
        let mv = if parity == 0 {
            Move::Naimark
        } else {
            Move::Spatial
        };
        cur = mv.apply(cur)?;
        parity ^= 1;
        if cur == t && parity == 0 {
            return Ok(cycle);
        }
        if !cycle.contains(&cur) {
            cycle.push(cur);
        }
    }
    Err(TripleError::WalkCap { cap: 30 })
}

pub fn classify(t: ParamTriple) -> Result<OrbitClass> {
    classify_with_cap(t, DEFAULT_WALK_CAP)
}

pub fn classify_with_cap(t: ParamTriple, cap: u32) -> Result<OrbitClass> {
    t.query_ok()?;
    if t.n == 2 || t.n == 3 {
        let tag = if t.n == 2 {
            OrbitTag::SmallN2
        } else {
            OrbitTag::SmallN3
        };
        return Ok(OrbitClass {
            tag,
            minimal_point: small_n_seed(t).map(|(seed, _)| seed),
            orbit_sample: small_n_cycle(t)?,
        });
    }
    let f = t.invariant()?;
    if f == 0 {
        debug_assert!(t.n == 4 && t.d == 2 * t.r);
        return Ok(OrbitClass {
            tag: OrbitTag::FZero,
            minimal_point: Some(t),
            orbit_sample: vec![t],
        });
    }
    let (low, moves) = walk_inward(t, cap)?;
    let (_, path) = replay(low, &moves)?;
    let tag = if f > 0 {
        OrbitTag::FPos
    } else if low.n * low.r == low.d || low.r == low.d {
        OrbitTag::FNegTrivialSeed
    } else {
        OrbitTag::FNegNoTFF
    };
    Ok(OrbitClass {
        tag,
        minimal_point: Some(low),
        orbit_sample: path,
    })
}

/// Decides whether a TFF(D,N,R) exists: yes iff f >= 0 or the orbit reaches
/// a positive (D0,N,R0) with R0 in {D0/N, D0}. When it does, every such TFF
/// has a real witness and the chain replays the complements from the seed.
pub fn tff_exists(t: ParamTriple) -> Result<ExistenceVerdict> {
    tff_exists_with_cap(t, DEFAULT_WALK_CAP)
}

pub fn tff_exists_with_cap(t: ParamTriple, cap: u32) -> Result<ExistenceVerdict> {
    t.query_ok()?;
    if t.n == 2 || t.n == 3 {
        return Ok(match small_n_seed(t) {
            Some((seed, chain)) => ExistenceVerdict {
                exists: true,
                seed: Some(seed),
                chain,
            },
            None => ExistenceVerdict {
                exists: false,
                seed: None,
                chain: vec![],
            },
        });
    }
    let f = t.invariant()?;
    let (low, moves) = walk_inward(t, cap)?;
    if f >= 0 || low.n * low.r == low.d || low.r == low.d {
        let (chain, path) = replay(low, &moves)?;
        debug_assert_eq!(*path.last().unwrap(), t);
        Ok(ExistenceVerdict {
            exists: true,
            seed: Some(low),
            chain,
        })
    } else {
        Ok(ExistenceVerdict {
            exists: false,
            seed: None,
            chain: vec![],
        })
    }
}

/// Necessary condition for equi-isoclinicity: R = R0 and D in {D0, NR0-D0}
/// for the orbit's least point (D0,N,R0), and never R < D < 2R.
pub fn eitff_feasible(t: ParamTriple) -> Result<bool> {
    t.query_ok()?;
    let verdict = tff_exists(t)?;
    let Some(seed) = verdict.seed else {
        return Ok(false);
    };
    let shapes_ok = t.r == seed.r && (t.d == seed.d || t.d == seed.n * seed.r - seed.d);
    let wedge = t.r < t.d && t.d < 2 * t.r;
    Ok(verdict.exists && shapes_ok && !wedge)
}

/// Most subspaces with pairwise-equal principal angles a D-dimensional space
/// admits: D(D+1)/2 over the reals, D^2 over the complex numbers.
pub fn gerzon_max(d: i128, field: Field) -> Result<i128> {
    if d < 1 {
        return Err(TripleError::InvalidQuery {
            d,
            n: 0,
            r: 0,
            reason: "D must be positive",
        });
    }
    match field {
        Field::Real => mul(d, d + 1).map(|x| x / 2),
        Field::Complex => mul(d, d),
    }
}
