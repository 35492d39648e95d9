//! Finite abelian groups presented as products of cyclic factors, their
//! characters, and the small amount of Fourier analysis the harmonic
//! constructions need.
//!
//! Elements are handled internally as indices in mixed-radix order (leftmost
//! factor most significant); `GroupElement` is the coordinate form used at
//! the API surface. Character values are computed from an exact rational
//! phase, so characters of order 1, 2 and 4 come out exactly.

use crate::error::GroupError;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

type Result<T> = std::result::Result<T, GroupError>;

/// Largest group order the constructors accept.
pub const ORDER_CAP: u64 = 4096;

/// Coordinates of one element, one entry per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement(pub Vec<u64>);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    moduli: Vec<u64>,
}

impl AbelianGroup {
    pub fn new(moduli: Vec<u64>) -> Result<Self> {
        Self::with_cap(moduli, ORDER_CAP)
    }

    pub fn with_cap(moduli: Vec<u64>, cap: u64) -> Result<Self> {
        if moduli.is_empty() {
            return Err(GroupError::InvalidModulus(0));
        }
        let mut order: u64 = 1;
        for &m in &moduli {
            if m == 0 {
                return Err(GroupError::InvalidModulus(m));
            }
            order = order.checked_mul(m).ok_or(GroupError::OrderCap {
                order: u64::MAX,
                cap,
            })?;
            if order > cap {
                return Err(GroupError::OrderCap { order, cap });
            }
        }
        Ok(AbelianGroup { moduli })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    /// Parses literals like "Z13" or "Z3xZ3".
    pub fn parse(literal: &str) -> Result<Self> {
        let mut moduli = Vec::new();
        for part in literal.split('x') {
            let digits = part
                .strip_prefix('Z')
                .or_else(|| part.strip_prefix('z'))
                .ok_or_else(|| GroupError::BadLiteral(literal.to_string()))?;
            let m: u64 = digits
                .parse()
                .map_err(|_| GroupError::BadLiteral(literal.to_string()))?;
            moduli.push(m);
        }
        Self::new(moduli)
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u64 {
        self.moduli.iter().product()
    }

    pub fn literal(&self) -> String {
        self.moduli
            .iter()
            .map(|m| format!("Z{m}"))
            .collect::<Vec<_>>()
            .join("x")
    }

    pub fn index_of(&self, e: &GroupElement) -> Result<usize> {
        if e.0.len() != self.moduli.len() {
            return Err(GroupError::CoordLength {
                expected: self.moduli.len(),
                got: e.0.len(),
            });
        }
        let mut idx: u64 = 0;
        for (&c, &m) in e.0.iter().zip(&self.moduli) {
            if c >= m {
                return Err(GroupError::CoordRange {
                    value: c,
                    modulus: m,
                });
            }
            idx = idx * m + c;
        }
        Ok(idx as usize)
    }

    pub fn element(&self, mut idx: usize) -> GroupElement {
        debug_assert!((idx as u64) < self.order());
        let mut coords = vec![0u64; self.moduli.len()];
        for (slot, &m) in coords.iter_mut().zip(&self.moduli).rev() {
            *slot = (idx as u64) % m;
            idx /= m as usize;
        }
        GroupElement(coords)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ea, eb) = (self.element(a), self.element(b));
        let coords =
            ea.0.iter()
                .zip(&eb.0)
                .zip(&self.moduli)
                .map(|((&x, &y), &m)| (x + y) % m)
                .collect();
        self.index_of(&GroupElement(coords))
            .expect("sum of valid elements is valid")
    }

    pub fn neg(&self, a: usize) -> usize {
        let ea = self.element(a);
        let coords =
            ea.0.iter()
                .zip(&self.moduli)
                .map(|(&x, &m)| (m - x) % m)
                .collect();
        self.index_of(&GroupElement(coords))
            .expect("negation of a valid element is valid")
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn zero(&self) -> usize {
        0
    }

    /// Exact phase of the character pairing: gamma_a(g) = exp(2*pi*i*t/L)
    /// with t/L = sum_j a_j g_j / m_j reduced over the common denominator
    /// L = lcm(moduli).
    fn phase(&self, a: usize, g: usize) -> (u64, u64) {
        let l = self.moduli.iter().fold(1u64, |acc, &m| lcm(acc, m));
        let (ea, eg) = (self.element(a), self.element(g));
        let mut t: u64 = 0;
        for ((&ca, &cg), &m) in ea.0.iter().zip(&eg.0).zip(&self.moduli) {
            t = (t + (ca % m) * (cg % m) % m * (l / m)) % l;
        }
        (t, l)
    }

    pub fn character_value(&self, a: usize, g: usize) -> Complex64 {
        let (t, l) = self.phase(a, g);
        // quarter turns exactly
        match (4 * t).checked_div(l) {
            Some(q) if 4 * t == q * l => match q {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, 1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, -1.0),
            },
            _ => Complex64::from_polar(1.0, TAU * t as f64 / l as f64),
        }
    }

    /// Whether gamma_a(g) = 1, decided exactly.
    pub fn pairs_trivially(&self, a: usize, g: usize) -> bool {
        self.phase(a, g).0 == 0
    }

    /// Analysis transform: out(a) = sum_g conj(gamma_a(g)) y(g).
    pub fn dft(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.order() as usize;
        if y.len() != n {
            return Err(GroupError::VectorLength {
                expected: n,
                got: y.len(),
            });
        }
        Ok((0..n)
            .map(|a| {
                (0..n)
                    .map(|g| self.character_value(a, g).conj() * y[g])
                    .sum()
            })
            .collect())
    }

    /// Synthesis transform: out(g) = (1/|G|) sum_a gamma_a(g) yhat(a).
    pub fn inverse_dft(&self, yhat: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.order() as usize;
        if yhat.len() != n {
            return Err(GroupError::VectorLength {
                expected: n,
                got: yhat.len(),
            });
        }
        let scale = 1.0 / n as f64;
        Ok((0..n)
            .map(|g| {
                (0..n)
                    .map(|a| self.character_value(a, g) * yhat[a])
                    .sum::<Complex64>()
                    * scale
            })
            .collect())
    }

    /// (x*y)(g) = sum_h x(h) y(g-h).
    pub fn convolve(&self, x: &[Complex64], y: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.order() as usize;
        if x.len() != n {
            return Err(GroupError::VectorLength {
                expected: n,
                got: x.len(),
            });
        }
        if y.len() != n {
            return Err(GroupError::VectorLength {
                expected: n,
                got: y.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for g in 0..n {
            for h in 0..n {
                out[g] += x[h] * y[self.sub(g, h)];
            }
        }
        Ok(out)
    }

    /// Difference counts of a set: out(g) = #{(s,t) in S x S : s - t = g}.
    pub fn autocorrelation(&self, set: &[usize]) -> Vec<i64> {
        let mut out = vec![0i64; self.order() as usize];
        for &s in set {
            for &t in set {
                out[self.sub(s, t)] += 1;
            }
        }
        out
    }

    /// 0/1 indicator vector of a set of element indices.
    pub fn indicator(&self, set: &[usize]) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.order() as usize];
        for &s in set {
            v[s] = Complex64::new(1.0, 0.0);
        }
        v
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order() as usize
    }
}

/// A subgroup, stored as the sorted indices of its elements in the parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: AbelianGroup,
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn from_elements(parent: &AbelianGroup, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.is_empty() {
            return Err(GroupError::NotASubgroup {
                reason: "a subgroup cannot be empty",
            });
        }
        if elements.iter().any(|&e| e as u64 >= parent.order()) {
            return Err(GroupError::NotASubgroup {
                reason: "element index out of range",
            });
        }
        // a nonempty finite subset closed under addition is a subgroup
        for &a in &elements {
            for &b in &elements {
                if elements.binary_search(&parent.add(a, b)).is_err() {
                    return Err(GroupError::NotASubgroup {
                        reason: "not closed under addition",
                    });
                }
            }
        }
        Ok(Subgroup {
            parent: parent.clone(),
            elements,
        })
    }

    pub fn from_generators(parent: &AbelianGroup, gens: &[usize]) -> Result<Self> {
        if gens.iter().any(|&g| g as u64 >= parent.order()) {
            return Err(GroupError::NotASubgroup {
                reason: "generator index out of range",
            });
        }
        let mut seen = vec![false; parent.order() as usize];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(cur) = stack.pop() {
            for &g in gens {
                let next = parent.add(cur, g);
                if !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        let elements = seen
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| i)
            .collect();
        Ok(Subgroup {
            parent: parent.clone(),
            elements,
        })
    }

    pub fn trivial(parent: &AbelianGroup) -> Self {
        Subgroup {
            parent: parent.clone(),
            elements: vec![0],
        }
    }

    pub fn full(parent: &AbelianGroup) -> Self {
        Subgroup {
            parent: parent.clone(),
            elements: (0..parent.order() as usize).collect(),
        }
    }

    /// Parses literals like "Z13x{0}" (a full factor) or "{0,2}" (a listed
    /// subset of one factor) against the parent's factor structure; the
    /// result is the product of the per-factor pieces.
    pub fn parse(parent: &AbelianGroup, literal: &str) -> Result<Self> {
        let parts: Vec<&str> = literal.split('x').collect();
        if parts.len() != parent.moduli().len() {
            return Err(GroupError::BadLiteral(literal.to_string()));
        }
        let mut per_factor: Vec<Vec<u64>> = Vec::with_capacity(parts.len());
        for (part, &m) in parts.iter().zip(parent.moduli()) {
            if let Some(inner) = part.strip_prefix('{').and_then(|p| p.strip_suffix('}')) {
                let mut vals = Vec::new();
                for tok in inner.split(',') {
                    let v: u64 = tok
                        .trim()
                        .parse()
                        .map_err(|_| GroupError::BadLiteral(literal.to_string()))?;
                    if v >= m {
                        return Err(GroupError::CoordRange {
                            value: v,
                            modulus: m,
                        });
                    }
                    vals.push(v);
                }
                per_factor.push(vals);
            } else {
                let factor = AbelianGroup::parse(part)?;
                if factor.moduli() != [m] {
                    return Err(GroupError::BadLiteral(literal.to_string()));
                }
                per_factor.push((0..m).collect());
            }
        }
        let mut elements = vec![Vec::new()];
        for vals in &per_factor {
            elements = elements
                .into_iter()
                .flat_map(|prefix: Vec<u64>| {
                    vals.iter().map(move |&v| {
                        let mut e = prefix.clone();
                        e.push(v);
                        e
                    })
                })
                .collect();
        }
        let idxs = elements
            .into_iter()
            .map(|coords| parent.index_of(&GroupElement(coords)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_elements(parent, idxs)
    }

    pub fn parent(&self) -> &AbelianGroup {
        &self.parent
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.elements.binary_search(&idx).is_ok()
    }

    /// The annihilator {a : gamma_a(h) = 1 for all h in H}, decided exactly.
    pub fn annihilator(&self) -> Subgroup {
        let elements = self
            .parent
            .elements()
            .filter(|&a| {
                self.elements
                    .iter()
                    .all(|&h| self.parent.pairs_trivially(a, h))
            })
            .collect();
        Subgroup {
            parent: self.parent.clone(),
            elements,
        }
    }

    /// Cosets of this subgroup, each sorted ascending, ordered by their
    /// least member (which serves as the canonical representative).
    pub fn cosets(&self) -> Vec<Vec<usize>> {
        let order = self.parent.order() as usize;
        let mut assigned = vec![false; order];
        let mut out = Vec::with_capacity(order / self.elements.len());
        for rep in 0..order {
            if assigned[rep] {
                continue;
            }
            let mut coset: Vec<usize> = self
                .elements
                .iter()
                .map(|&h| self.parent.add(rep, h))
                .collect();
            coset.sort_unstable();
            for &c in &coset {
                assigned[c] = true;
            }
            out.push(coset);
        }
        out
    }

    /// Splits `set` by coset; returns (canonical representative, members of
    /// `set` in that coset) for every coset of the parent, including empty
    /// ones, in canonical coset order.
    pub fn partition(&self, set: &[usize]) -> Vec<(usize, Vec<usize>)> {
        self.cosets()
            .into_iter()
            .map(|coset| {
                let rep = coset[0];
                let members = set.iter().copied().filter(|s| coset.contains(s)).collect();
                (rep, members)
            })
            .collect()
    }

    /// Presents the subgroup as a standalone group when a natural
    /// presentation exists, together with the list sending each new index
    /// to the parent element it names. Tries a coordinate-aligned product
    /// first, then a cyclic presentation; sums of intertwined factors get
    /// `None`.
    pub fn as_group(&self) -> Option<(AbelianGroup, Vec<usize>)> {
        let k = self.parent.moduli().len();
        // per-factor coordinate images
        let mut per_factor: Vec<Vec<u64>> = vec![Vec::new(); k];
        for &e in &self.elements {
            for (j, &c) in self.parent.element(e).0.iter().enumerate() {
                if !per_factor[j].contains(&c) {
                    per_factor[j].push(c);
                }
            }
        }
        let prod: u64 = per_factor.iter().map(|s| s.len() as u64).product();
        if prod == self.order() {
            // subgroup is the product of its coordinate images, and each
            // image is automatically a cyclic subgroup {0, m/s, 2m/s, ...}
            let mut moduli = Vec::new();
            let mut strides = Vec::new();
            for (vals, &m) in per_factor.iter().zip(self.parent.moduli()) {
                let s = vals.len() as u64;
                debug_assert_eq!(m % s, 0);
                if s > 1 {
                    moduli.push(s);
                }
                strides.push(m / s);
            }
            if moduli.is_empty() {
                moduli.push(1);
            }
            let group = AbelianGroup::new(moduli).ok()?;
            let mut map = Vec::with_capacity(self.elements.len());
            for idx in group.elements() {
                let new_coords = group.element(idx).0;
                let mut parent_coords = Vec::with_capacity(k);
                let mut pos = 0;
                for (j, (vals, stride)) in per_factor.iter().zip(&strides).enumerate() {
                    if vals.len() > 1 {
                        parent_coords.push(new_coords[pos] * stride);
                        pos += 1;
                    } else {
                        let _ = j;
                        parent_coords.push(0);
                    }
                }
                map.push(self.parent.index_of(&GroupElement(parent_coords)).ok()?);
            }
            if map.iter().any(|p| !self.contains(*p)) {
                return None;
            }
            return Some((group, map));
        }
        // cyclic fallback: look for a single generator of full order
        for &g in &self.elements {
            let mut cur = 0usize;
            let mut map = Vec::with_capacity(self.elements.len());
            for _ in 0..self.elements.len() {
                map.push(cur);
                cur = self.parent.add(cur, g);
            }
            if cur == 0 && map.len() == self.elements.len() {
                let mut sorted = map.clone();
                sorted.sort_unstable();
                if sorted == self.elements {
                    let group = AbelianGroup::new(vec![self.order()]).ok()?;
                    return Some((group, map));
                }
            }
        }
        None
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Checks the Poisson relation dft(indicator(H)) = |H| * indicator(ann(H))
/// numerically; used by tests and the harmonic cross-checks.
pub fn poisson_residual(h: &Subgroup) -> f64 {
    let g = h.parent();
    let lhs = g
        .dft(&g.indicator(h.elements()))
        .expect("indicator has the right length");
    let ann = h.annihilator();
    let mut worst = 0.0f64;
    for a in g.elements() {
        let want = if ann.contains(a) {
            h.order() as f64
        } else {
            0.0
        };
        worst = worst.max((lhs[a] - Complex64::new(want, 0.0)).norm());
    }
    worst
}
