//! Novelty certification for equichordal tight-fusion-frame parameters.
//!
//! A query (D,N,R) over a field is checked against every construction rule
//! the catalog knows. Each rule answers three-valued: `Yes` means a known
//! construction reaches the parameters, `No` means this route provably
//! cannot, `Unknown` means the tables are silent. The verdict folds the
//! novelty-relevant answers together with the exact orbit classification,
//! so a triple is reported `Novel` only when every route is conclusively
//! ruled out.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::designs;
use crate::error::CatalogError;
use crate::groups::{AbelianGroup, Subgroup};
use crate::triples::{self, OrbitTag, ParamTriple};
use crate::Field;

const EMBEDDED_CATALOG: &str = include_str!("catalog/data/ectff_catalog.json");

pub const CATALOG_SCHEMA: &str = "ectff-catalog/1";

/// Hadamard orders are generated constructively up to this bound; beyond it
/// the table answers `Unknown`.
const HADAMARD_LIMIT: u64 = 1000;

/// Recursion guard for the coverage evaluators. The memo is filled bottom-up
/// so this is never reached in practice; hitting it degrades to `Unknown`.
const MAX_DEPTH: u32 = 8;

/// Largest number of equal-ratio parts the decomposition search will try.
const SUM_PARTS_CAP: i128 = 4096;

/// Three-valued existence answer with Kleene semantics: `and` is
/// `No`-dominant, `or` is `Yes`-dominant, `Unknown` absorbs the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome3 {
    Yes,
    No,
    Unknown,
}

impl Outcome3 {
    pub fn and(self, other: Outcome3) -> Outcome3 {
        match (self, other) {
            (Outcome3::No, _) | (_, Outcome3::No) => Outcome3::No,
            (Outcome3::Unknown, _) | (_, Outcome3::Unknown) => Outcome3::Unknown,
            _ => Outcome3::Yes,
        }
    }

    pub fn or(self, other: Outcome3) -> Outcome3 {
        match (self, other) {
            (Outcome3::Yes, _) | (_, Outcome3::Yes) => Outcome3::Yes,
            (Outcome3::Unknown, _) | (_, Outcome3::Unknown) => Outcome3::Unknown,
            _ => Outcome3::No,
        }
    }

    pub fn from_bool(b: bool) -> Outcome3 {
        if b {
            Outcome3::Yes
        } else {
            Outcome3::No
        }
    }
}

impl fmt::Display for Outcome3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome3::Yes => write!(f, "yes"),
            Outcome3::No => write!(f, "no"),
            Outcome3::Unknown => write!(f, "unknown"),
        }
    }
}

/// Final certification verdict for a parameter triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// Negative invariant: the complete characterization settles the query.
    SettledByFNeg,
    /// The orbit minimum has rank one and the required ETF provably does not
    /// exist, so no equichordal tight fusion frame exists on the orbit.
    SettledNegative,
    /// Some novelty-relevant rule constructs the parameters.
    CoveredByCatalog,
    /// No rule covers the parameters but at least one is undetermined.
    Indeterminate,
    /// Every novelty-relevant rule conclusively fails to reach the triple.
    Novel,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::SettledByFNeg => "settled (negative invariant)",
            Verdict::SettledNegative => "settled negative",
            Verdict::CoveredByCatalog => "covered by catalog",
            Verdict::Indeterminate => "indeterminate",
            Verdict::Novel => "novel",
        };
        write!(f, "{s}")
    }
}

/// The certification rules, in evaluation order. `C-vi-main` is recorded for
/// context but never counts toward coverage: it is the recipe that produces
/// new parameters rather than a witness of prior art.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CatalogRule {
    #[serde(rename = "C-i")]
    EitffExists,
    #[serde(rename = "C-ii")]
    EqualRatioDirectSum,
    #[serde(rename = "C-iii")]
    FieldHalving,
    #[serde(rename = "C-iv")]
    PrimeTriangular,
    #[serde(rename = "C-v")]
    ZaunerDesign,
    #[serde(rename = "C-vi-main")]
    WilsonDifferenceFamily,
    #[serde(rename = "C-vi-dds")]
    KingDivisibleDifferenceSet,
    #[serde(rename = "C-vii")]
    PlanarDifferenceShape,
    #[serde(rename = "C-viii")]
    PowerOfTwoFamily,
    #[serde(rename = "C-ix")]
    SporadicTable,
}

impl CatalogRule {
    pub const ALL: [CatalogRule; 10] = [
        CatalogRule::EitffExists,
        CatalogRule::EqualRatioDirectSum,
        CatalogRule::FieldHalving,
        CatalogRule::PrimeTriangular,
        CatalogRule::ZaunerDesign,
        CatalogRule::WilsonDifferenceFamily,
        CatalogRule::KingDivisibleDifferenceSet,
        CatalogRule::PlanarDifferenceShape,
        CatalogRule::PowerOfTwoFamily,
        CatalogRule::SporadicTable,
    ];

    pub fn id(self) -> &'static str {
        match self {
            CatalogRule::EitffExists => "C-i",
            CatalogRule::EqualRatioDirectSum => "C-ii",
            CatalogRule::FieldHalving => "C-iii",
            CatalogRule::PrimeTriangular => "C-iv",
            CatalogRule::ZaunerDesign => "C-v",
            CatalogRule::WilsonDifferenceFamily => "C-vi-main",
            CatalogRule::KingDivisibleDifferenceSet => "C-vi-dds",
            CatalogRule::PlanarDifferenceShape => "C-vii",
            CatalogRule::PowerOfTwoFamily => "C-viii",
            CatalogRule::SporadicTable => "C-ix",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            CatalogRule::EitffExists => "equi-isoclinic existence",
            CatalogRule::EqualRatioDirectSum => "equal-ratio direct sum",
            CatalogRule::FieldHalving => "field halving",
            CatalogRule::PrimeTriangular => "prime triangular family",
            CatalogRule::ZaunerDesign => "spanning block design",
            CatalogRule::WilsonDifferenceFamily => "difference family recipe",
            CatalogRule::KingDivisibleDifferenceSet => "semiregular divisible difference set",
            CatalogRule::PlanarDifferenceShape => "planar difference shape",
            CatalogRule::PowerOfTwoFamily => "power-of-two family",
            CatalogRule::SporadicTable => "sporadic table",
        }
    }

    pub fn novelty_relevant(self) -> bool {
        !matches!(self, CatalogRule::WilsonDifferenceFamily)
    }
}

impl fmt::Display for CatalogRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl FromStr for CatalogRule {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        CatalogRule::ALL
            .into_iter()
            .find(|r| r.id() == s)
            .ok_or_else(|| CatalogError::UnknownRule(s.to_string()))
    }
}

/// One rule's answer for one query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleOutcome {
    pub rule: CatalogRule,
    pub outcome: Outcome3,
    pub novelty_relevant: bool,
    pub evidence: String,
}

/// Full certification record for one query triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub query: ParamTriple,
    pub field: Field,
    pub invariant: i128,
    pub orbit_tag: OrbitTag,
    pub minimal_point: Option<ParamTriple>,
    pub tff_exists: bool,
    pub verdict: Verdict,
    pub summary: String,
    pub rules: Vec<RuleOutcome>,
    pub catalog_schema: String,
    pub catalog_hash: String,
}

#[derive(Deserialize)]
struct RawCatalog {
    schema: String,
    etf: RawEtf,
    #[serde(default)]
    quaternionic_etf_ranges: Vec<RawDimRange>,
    #[serde(default)]
    hadamard_orders: Vec<u64>,
    #[serde(default)]
    bibd_yes: Vec<(u64, u64, u64)>,
    #[serde(default)]
    bibd_no: Vec<(u64, u64, u64)>,
    #[serde(default)]
    eitff_real_yes: Vec<(i128, i128, i128)>,
    #[serde(default)]
    ectff_real_ranges: Vec<RawTripleRange>,
    #[serde(default)]
    ectff_real_sporadic: Vec<(i128, i128, i128)>,
}

#[derive(Deserialize, Default)]
struct RawEtf {
    #[serde(default)]
    complex_yes: Vec<(i128, i128)>,
    #[serde(default)]
    complex_no: Vec<(i128, i128)>,
    #[serde(default)]
    real_yes: Vec<(i128, i128)>,
    #[serde(default)]
    real_no: Vec<(i128, i128)>,
}

#[derive(Deserialize)]
struct RawDimRange {
    d: i128,
    n_min: i128,
    n_max: i128,
}

#[derive(Deserialize)]
struct RawTripleRange {
    d: i128,
    r: i128,
    n_min: i128,
    n_max: i128,
}

type CacheKey = (u8, i128, i128, i128, Field);

/// Curated existence tables plus the rule engine built on them.
#[derive(Debug)]
pub struct Catalog {
    schema: String,
    content_hash: String,
    etf_complex_yes: BTreeSet<(i128, i128)>,
    etf_complex_no: BTreeSet<(i128, i128)>,
    etf_real_yes: BTreeSet<(i128, i128)>,
    etf_real_no: BTreeSet<(i128, i128)>,
    quat_ranges: Vec<(i128, i128, i128)>,
    hadamard: BTreeSet<u64>,
    bibd_yes: BTreeSet<(u64, u64, u64)>,
    bibd_no: BTreeSet<(u64, u64, u64)>,
    eitff_real_yes: BTreeSet<(i128, i128, i128)>,
    ectff_real_ranges: Vec<(i128, i128, i128, i128)>,
    ectff_real_sporadic: BTreeSet<(i128, i128, i128)>,
    cache: Mutex<HashMap<CacheKey, Outcome3>>,
}

impl Default for Catalog {
    fn default() -> Self {
        Catalog::embedded()
    }
}

impl Catalog {
    /// The catalog compiled into the library.
    pub fn embedded() -> Catalog {
        Catalog::from_json(EMBEDDED_CATALOG).expect("embedded catalog data is valid")
    }

    pub fn from_json(raw: &str) -> Result<Catalog, CatalogError> {
        let parsed: RawCatalog =
            serde_json::from_str(raw).map_err(|e| CatalogError::BadData(e.to_string()))?;
        if parsed.schema != CATALOG_SCHEMA {
            return Err(CatalogError::BadData(format!(
                "unsupported catalog schema {:?} (expected {:?})",
                parsed.schema, CATALOG_SCHEMA
            )));
        }
        for r in &parsed.quaternionic_etf_ranges {
            if r.d < 1 || r.n_min > r.n_max {
                return Err(CatalogError::BadData("bad quaternionic range".into()));
            }
        }
        for r in &parsed.ectff_real_ranges {
            if r.d < 1 || r.r < 1 || r.n_min > r.n_max {
                return Err(CatalogError::BadData("bad equichordal range".into()));
            }
        }
        let mut hasher = Sha256::new();
        hasher.update(raw.as_bytes());
        let content_hash = hex(&hasher.finalize());
        Ok(Catalog {
            schema: parsed.schema,
            content_hash,
            etf_complex_yes: parsed.etf.complex_yes.into_iter().collect(),
            etf_complex_no: parsed.etf.complex_no.into_iter().collect(),
            etf_real_yes: parsed.etf.real_yes.into_iter().collect(),
            etf_real_no: parsed.etf.real_no.into_iter().collect(),
            quat_ranges: parsed
                .quaternionic_etf_ranges
                .into_iter()
                .map(|r| (r.d, r.n_min, r.n_max))
                .collect(),
            hadamard: hadamard_closure(&parsed.hadamard_orders),
            bibd_yes: parsed.bibd_yes.into_iter().collect(),
            bibd_no: parsed.bibd_no.into_iter().collect(),
            eitff_real_yes: parsed.eitff_real_yes.into_iter().collect(),
            ectff_real_ranges: parsed
                .ectff_real_ranges
                .into_iter()
                .map(|r| (r.d, r.r, r.n_min, r.n_max))
                .collect(),
            ectff_real_sporadic: parsed.ectff_real_sporadic.into_iter().collect(),
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn load(path: &Path) -> Result<Catalog, CatalogError> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| CatalogError::BadData(format!("cannot read {}: {e}", path.display())))?;
        Catalog::from_json(&raw)
    }

    /// The `ECTFF_CATALOG` environment variable overrides the embedded data.
    pub fn load_default() -> Result<Catalog, CatalogError> {
        match std::env::var("ECTFF_CATALOG") {
            Ok(path) => Catalog::load(Path::new(&path)),
            Err(_) => Ok(Catalog::embedded()),
        }
    }

    pub fn schema(&self) -> &str {
        &self.schema
    }

    /// SHA-256 of the raw catalog text, pinning reports to their data.
    pub fn content_hash(&self) -> &str {
        &self.content_hash
    }

    // ---- existence tables ----

    pub fn etf_exists(&self, d: i128, n: i128, field: Field) -> Outcome3 {
        self.etf_explained(d, n, field).0
    }

    /// ETF(D,N) existence combines Gerzon's bound, the real integrality and
    /// conference obstructions, curated tables, and complement symmetry.
    fn etf_explained(&self, d: i128, n: i128, field: Field) -> (Outcome3, String) {
        let (out, why) = self.etf_direct(d, n, field);
        if out != Outcome3::Unknown {
            return (out, why);
        }
        let dc = n - d;
        if dc >= 1 && dc != d {
            let (o2, w2) = self.etf_direct(dc, n, field);
            if o2 != Outcome3::Unknown {
                return (o2, format!("complement ETF({dc}, {n}): {w2}"));
            }
        }
        (Outcome3::Unknown, why)
    }

    fn etf_direct(&self, d: i128, n: i128, field: Field) -> (Outcome3, String) {
        if d < 1 || n < 1 {
            return (Outcome3::No, "degenerate dimensions".into());
        }
        if n < d {
            return (
                Outcome3::No,
                format!("N = {n} < D = {d}: a tight frame needs at least D vectors"),
            );
        }
        if n == d {
            return (Outcome3::Yes, "orthonormal basis".into());
        }
        if n == d + 1 {
            return (Outcome3::Yes, "simplex".into());
        }
        if d == 1 {
            return (Outcome3::Yes, "unimodular scalars".into());
        }
        match triples::gerzon_max(d, field) {
            Ok(cap) if n > cap => {
                return (
                    Outcome3::No,
                    format!("Gerzon bound: N = {n} exceeds {cap} for D = {d} over {field}"),
                );
            }
            Ok(_) => {}
            Err(_) => return (Outcome3::Unknown, "dimension out of range".into()),
        }
        if field == Field::Real {
            if n == 2 * d {
                if n % 4 != 2 {
                    return (
                        Outcome3::No,
                        format!(
                            "a real ETF({d}, {n}) needs a symmetric conference matrix of order {n}, \
                             which requires {n} = 2 (mod 4)"
                        ),
                    );
                }
            } else if let Some(reason) = real_integrality_obstruction(d, n) {
                return (Outcome3::No, reason);
            }
        }
        let yes = match field {
            Field::Complex => {
                self.etf_complex_yes.contains(&(d, n)) || self.etf_real_yes.contains(&(d, n))
            }
            Field::Real => self.etf_real_yes.contains(&(d, n)),
        };
        if yes {
            return (
                Outcome3::Yes,
                format!("tabulated ETF({d}, {n}) over {field}"),
            );
        }
        let no = match field {
            Field::Complex => self.etf_complex_no.contains(&(d, n)),
            Field::Real => self.etf_real_no.contains(&(d, n)),
        };
        if no {
            return (
                Outcome3::No,
                format!("tabulated nonexistence of ETF({d}, {n}) over {field}"),
            );
        }
        (
            Outcome3::Unknown,
            format!("no table entry for an ETF({d}, {n}) over {field}"),
        )
    }

    /// The quaternionic tables record only known constructions; no ceiling of
    /// Gerzon type is tabulated, so the negative answer never occurs beyond
    /// shape degeneracies.
    pub fn quaternionic_etf(&self, d: i128, n: i128) -> Outcome3 {
        if d < 1 || n < d {
            return Outcome3::No;
        }
        if n == d || n == d + 1 || d == 1 {
            return Outcome3::Yes;
        }
        for &(dd, lo, hi) in &self.quat_ranges {
            if dd == d && lo <= n && n <= hi {
                return Outcome3::Yes;
            }
        }
        Outcome3::Unknown
    }

    pub fn bibd_exists(&self, v: u64, k: u64, lambda: u64) -> Outcome3 {
        self.bibd_explained(v, k, lambda).0
    }

    fn bibd_explained(&self, v: u64, k: u64, lambda: u64) -> (Outcome3, String) {
        if v == 0 || k < 2 || lambda == 0 {
            return (Outcome3::No, "degenerate design parameters".into());
        }
        if k > v {
            return (
                Outcome3::No,
                format!("block size {k} exceeds the point count {v}"),
            );
        }
        if k == v {
            return (Outcome3::Yes, "every block equals the point set".into());
        }
        let vm1 = v - 1;
        let km1 = k - 1;
        if (lambda * vm1) % km1 != 0 {
            return (
                Outcome3::No,
                format!(
                    "replication lambda(V-1)/(K-1) = {}/{km1} is not an integer",
                    lambda * vm1
                ),
            );
        }
        let r = lambda * vm1 / km1;
        if (r * v) % k != 0 {
            return (
                Outcome3::No,
                format!("block count VR/K = {}/{k} is not an integer", r * v),
            );
        }
        let b = r * v / k;
        if b < v {
            return (Outcome3::No, format!("Fisher: B = {b} < V = {v}"));
        }
        if self.bibd_no.contains(&(v, k, lambda)) {
            return (
                Outcome3::No,
                format!("tabulated nonexistence of a 2-({v},{k},{lambda}) design"),
            );
        }
        if self.bibd_yes.contains(&(v, k, lambda)) {
            return (
                Outcome3::Yes,
                format!("tabulated 2-({v},{k},{lambda}) design"),
            );
        }
        if let Some(c) = binomial(v - 2, k - 2) {
            if c > 0 && lambda % c == 0 {
                return (
                    Outcome3::Yes,
                    format!("lambda = {lambda} is a multiple of C(V-2,K-2) = {c}: repeat the complete design"),
                );
            }
        }
        if lambda == 1 {
            if k == 3 && (v % 6 == 1 || v % 6 == 3) {
                return (
                    Outcome3::Yes,
                    format!("Steiner triple system on {v} points"),
                );
            }
            if v == k * k && is_prime_power(k) {
                return (Outcome3::Yes, format!("affine plane of order {k}"));
            }
            let q = k - 1;
            if q >= 2 && v == q * q + q + 1 && is_prime_power(q) {
                return (Outcome3::Yes, format!("projective plane of order {q}"));
            }
        }
        (
            Outcome3::Unknown,
            format!("no table entry for a 2-({v},{k},{lambda}) design"),
        )
    }

    /// Known Hadamard orders: the constructive closure of the Paley and
    /// Sylvester/Kronecker families up to 1000, plus any curated extras.
    pub fn hadamard_known(&self, order: u64) -> Outcome3 {
        if order == 0 {
            return Outcome3::No;
        }
        if order == 1 || order == 2 {
            return Outcome3::Yes;
        }
        if order % 4 != 0 {
            return Outcome3::No;
        }
        if self.hadamard.contains(&order) {
            Outcome3::Yes
        } else {
            Outcome3::Unknown
        }
    }

    // ---- equi-isoclinic coverage ----

    /// Three-valued: is an equi-isoclinic fusion frame with these parameters
    /// reachable from the catalog's constructions?
    pub fn eitff_covered(&self, t: ParamTriple, field: Field) -> Result<Outcome3, CatalogError> {
        triples::classify(t)?;
        Ok(self.eitff_rec(t, field, 0))
    }

    fn eitff_rec(&self, t: ParamTriple, field: Field, depth: u32) -> Outcome3 {
        if depth > MAX_DEPTH {
            return Outcome3::Unknown;
        }
        let key = (0u8, t.d, t.n, t.r, field);
        if let Some(hit) = self.cache_get(&key) {
            return hit;
        }
        let out = self
            .eitff_routes(t, field, depth)
            .iter()
            .fold(Outcome3::No, |acc, r| acc.or(r.0));
        self.cache_put(key, out);
        out
    }

    fn eitff_routes(&self, t: ParamTriple, field: Field, depth: u32) -> Vec<(Outcome3, String)> {
        match triples::tff_exists(t) {
            Err(_) => {
                return vec![(
                    Outcome3::Unknown,
                    "arithmetic overflow while classifying".into(),
                )]
            }
            Ok(v) if !v.exists => {
                return vec![(
                    Outcome3::No,
                    "no tight fusion frame exists at these parameters".into(),
                )]
            }
            Ok(_) => {}
        }
        match triples::eitff_feasible(t) {
            Err(_) => {
                return vec![(
                    Outcome3::Unknown,
                    "arithmetic overflow while classifying".into(),
                )]
            }
            Ok(false) => {
                return vec![(
                    Outcome3::No,
                    "the orbit conditions exclude equi-isoclinic parameters here".into(),
                )]
            }
            Ok(true) => {}
        }
        if t.r == t.d || t.n * t.r == t.d {
            return vec![(
                Outcome3::Yes,
                "trivial shape: identical or orthogonally split subspaces".into(),
            )];
        }
        let mut routes: Vec<(Outcome3, String)> = Vec::new();
        if t.n == 4 && t.d == 2 * t.r {
            match field {
                Field::Complex => {
                    routes.push((Outcome3::Yes, format!("the (2R,4,R) family at R = {}", t.r)))
                }
                Field::Real => routes.push(if t.r % 2 == 0 {
                    (
                        Outcome3::Yes,
                        format!("the real (2R,4,R) family at even R = {}", t.r),
                    )
                } else {
                    (
                        Outcome3::No,
                        format!(
                            "the real (2R,4,R) family requires even R; R = {} is odd",
                            t.r
                        ),
                    )
                }),
            }
        }
        if t.r == 1 {
            let (o, why) = self.etf_explained(t.d, t.n, field);
            routes.push((
                o,
                format!("rank one is the ETF question for ({}, {}): {why}", t.d, t.n),
            ));
        }
        if t.d == t.n && t.r == 2 && t.n % 4 == 1 && as_u64(t.n).is_some_and(is_prime_power) {
            routes.push((
                Outcome3::Yes,
                format!(
                    "conference construction: N = {} is a prime power, 1 mod 4",
                    t.n
                ),
            ));
        }
        if self.eitff_real_yes.contains(&(t.d, t.n, t.r)) {
            routes.push((
                Outcome3::Yes,
                "tabulated sporadic equi-isoclinic family".into(),
            ));
        }
        if t.d % 2 == 0 && t.r % 2 == 0 {
            let half = ParamTriple::new(t.d / 2, t.n, t.r / 2);
            match field {
                Field::Real => {
                    let o = self.eitff_rec(half, Field::Complex, depth + 1);
                    routes.push((o, format!("doubling a complex construction at {half}")));
                    if t.d % 4 == 0 && t.r % 4 == 0 {
                        let quarter = ParamTriple::new(t.d / 4, t.n, t.r / 4);
                        let (oq, whyq) = self.quat_eitff(quarter);
                        routes.push((oq, format!("expanding a quaternionic construction: {whyq}")));
                    }
                }
                Field::Complex => {
                    let (oq, whyq) = self.quat_eitff(half);
                    routes.push((oq, format!("doubling a quaternionic construction: {whyq}")));
                }
            }
        } else {
            routes.push((Outcome3::No, odd_half_msg(t)));
        }
        let g = gcd(t.d, t.r);
        if g >= 2 {
            let (dp, rp) = (t.d / g, t.r / g);
            if g > SUM_PARTS_CAP {
                routes.push((Outcome3::Unknown, "decomposition space too large".into()));
            } else {
                let atoms: Vec<Outcome3> = (1..g)
                    .map(|k| {
                        self.eitff_rec(ParamTriple::new(k * dp, t.n, k * rp), field, depth + 1)
                    })
                    .collect();
                let out = sum_coverage(&atoms);
                let desc = self.atom_summary(t.n, dp, rp, &atoms, field, g);
                routes.push((out, format!("equal-ratio sums: {desc}")));
            }
        } else {
            routes.push((
                Outcome3::No,
                "the rank/dimension pair is primitive: no equal-ratio splitting".into(),
            ));
        }
        routes
    }

    fn quat_eitff(&self, t: ParamTriple) -> (Outcome3, String) {
        if !t.is_positive() || t.n < 2 || t.r > t.d {
            return (Outcome3::No, "degenerate quaternionic shape".into());
        }
        if t.r == t.d || t.n * t.r == t.d {
            return (Outcome3::Yes, "trivial quaternionic family".into());
        }
        if t.r == 1 {
            return match self.quaternionic_etf(t.d, t.n) {
                Outcome3::Yes => (
                    Outcome3::Yes,
                    format!("quaternionic ETF({}, {}) tabulated", t.d, t.n),
                ),
                Outcome3::No => (
                    Outcome3::No,
                    format!("no quaternionic ETF({}, {})", t.d, t.n),
                ),
                Outcome3::Unknown => (
                    Outcome3::Unknown,
                    format!("quaternionic ETF({}, {}) undetermined", t.d, t.n),
                ),
            };
        }
        (
            Outcome3::Unknown,
            "no quaternionic tables beyond rank one".into(),
        )
    }

    fn quat_ectff(&self, t: ParamTriple) -> (Outcome3, String) {
        // Same tables as the equi-isoclinic probe; equiangularity at rank one
        // is exactly equichordality there.
        self.quat_eitff(t)
    }

    // ---- equichordal coverage ----

    /// Three-valued: does some novelty-relevant rule construct an equichordal
    /// tight fusion frame with these parameters?
    pub fn ectff_covered(&self, t: ParamTriple, field: Field) -> Result<Outcome3, CatalogError> {
        triples::classify(t)?;
        Ok(self.ectff_rec(t, field, 0))
    }

    fn ectff_rec(&self, t: ParamTriple, field: Field, depth: u32) -> Outcome3 {
        if depth > MAX_DEPTH {
            return Outcome3::Unknown;
        }
        let key = (1u8, t.d, t.n, t.r, field);
        if let Some(hit) = self.cache_get(&key) {
            return hit;
        }
        let out = self.ectff_uncached(t, field, depth);
        self.cache_put(key, out);
        out
    }

    fn ectff_uncached(&self, t: ParamTriple, field: Field, depth: u32) -> Outcome3 {
        let Ok(class) = triples::classify(t) else {
            return Outcome3::Unknown;
        };
        let Ok(f) = t.invariant() else {
            return Outcome3::Unknown;
        };
        if f < 0 {
            // Complete characterization: the only families are the degenerate
            // ones descended from a trivial seed, and those are equichordal.
            return match triples::tff_exists(t) {
                Ok(v) => Outcome3::from_bool(v.exists),
                Err(_) => Outcome3::Unknown,
            };
        }
        let mut acc = Outcome3::No;
        for rule in CatalogRule::ALL {
            if !rule.novelty_relevant() {
                continue;
            }
            let (o, _) = self.rule_eval(rule, t, field, class.minimal_point, depth);
            acc = acc.or(o);
            if acc == Outcome3::Yes {
                break;
            }
        }
        acc
    }

    // ---- rule evaluation ----

    /// Evaluates one rule against a query, reporting the three-valued outcome
    /// with human-readable evidence.
    pub fn evaluate_rule(
        &self,
        rule: CatalogRule,
        t: ParamTriple,
        field: Field,
    ) -> Result<RuleOutcome, CatalogError> {
        let class = triples::classify(t)?;
        let (outcome, evidence) = self.rule_eval(rule, t, field, class.minimal_point, 0);
        Ok(RuleOutcome {
            rule,
            outcome,
            novelty_relevant: rule.novelty_relevant(),
            evidence,
        })
    }

    /// Complement moves preserve equichordality, so a rule firing anywhere on
    /// the orbit covers the query; the minimal point is the canonical other
    /// spot worth probing.
    fn rule_eval(
        &self,
        rule: CatalogRule,
        t: ParamTriple,
        field: Field,
        minimal: Option<ParamTriple>,
        depth: u32,
    ) -> (Outcome3, String) {
        let (o1, e1) = self.rule_at(rule, t, field, depth);
        if o1 == Outcome3::Yes || rule == CatalogRule::EqualRatioDirectSum {
            return (o1, e1);
        }
        if let Some(m) = minimal {
            if m != t {
                let (o2, e2) = self.rule_at(rule, m, field, depth);
                let combined = o1.or(o2);
                if combined != o1 {
                    return (combined, format!("at the orbit minimum {m}: {e2}"));
                }
            }
        }
        (o1, e1)
    }

    fn rule_at(
        &self,
        rule: CatalogRule,
        t: ParamTriple,
        field: Field,
        depth: u32,
    ) -> (Outcome3, String) {
        match rule {
            CatalogRule::EitffExists => self.rule_eitff(t, field, depth),
            CatalogRule::EqualRatioDirectSum => self.rule_direct_sum(t, field, depth),
            CatalogRule::FieldHalving => self.rule_halving(t, field, depth),
            CatalogRule::PrimeTriangular => self.rule_prime_triangular(t),
            CatalogRule::ZaunerDesign => self.rule_zauner(t),
            CatalogRule::WilsonDifferenceFamily => self.rule_wilson(t),
            CatalogRule::KingDivisibleDifferenceSet => self.rule_king_dds(t),
            CatalogRule::PlanarDifferenceShape => self.rule_planar(t, field),
            CatalogRule::PowerOfTwoFamily => self.rule_power_of_two(t),
            CatalogRule::SporadicTable => self.rule_sporadic(t),
        }
    }

    fn rule_eitff(&self, t: ParamTriple, field: Field, depth: u32) -> (Outcome3, String) {
        let routes = self.eitff_routes(t, field, depth);
        let out = routes.iter().fold(Outcome3::No, |acc, r| acc.or(r.0));
        // Keep the memo in sync with route-level evaluations.
        self.cache_put((0u8, t.d, t.n, t.r, field), out);
        let evidence = match out {
            Outcome3::Yes => {
                let why = routes
                    .iter()
                    .find(|r| r.0 == Outcome3::Yes)
                    .map(|r| r.1.as_str())
                    .unwrap_or("");
                format!("equi-isoclinic construction: {why}")
            }
            Outcome3::Unknown => {
                let whys: Vec<&str> = routes
                    .iter()
                    .filter(|r| r.0 == Outcome3::Unknown)
                    .map(|r| r.1.as_str())
                    .collect();
                format!("undetermined equi-isoclinic routes: {}", whys.join("; "))
            }
            Outcome3::No => {
                let whys: Vec<&str> = routes
                    .iter()
                    .filter(|r| r.0 == Outcome3::No)
                    .map(|r| r.1.as_str())
                    .collect();
                format!("no equi-isoclinic route: {}", whys.join("; "))
            }
        };
        (out, evidence)
    }

    fn rule_direct_sum(&self, t: ParamTriple, field: Field, depth: u32) -> (Outcome3, String) {
        let Ok(class) = triples::classify(t) else {
            return (Outcome3::Unknown, "classification failed".into());
        };
        let Ok(f) = t.invariant() else {
            return (Outcome3::Unknown, "classification failed".into());
        };
        if f < 0 {
            return (
                Outcome3::No,
                "negative invariant: no decomposition applies".into(),
            );
        }
        let Some(m0) = class.minimal_point else {
            return (Outcome3::No, "no minimal point".into());
        };
        let g = gcd(m0.d, m0.r);
        if g < 2 {
            return (
                Outcome3::No,
                format!("the orbit minimum {m0} is primitive: no equal-ratio decomposition"),
            );
        }
        if g > SUM_PARTS_CAP {
            return (Outcome3::Unknown, "decomposition space too large".into());
        }
        let (dp, rp) = (m0.d / g, m0.r / g);
        let atoms: Vec<Outcome3> = (1..g)
            .map(|k| self.ectff_rec(ParamTriple::new(k * dp, t.n, k * rp), field, depth + 1))
            .collect();
        let out = sum_coverage(&atoms);
        let desc = self.atom_summary(t.n, dp, rp, &atoms, field, g);
        let mut evidence = format!(
            "decomposition of the orbit minimum {m0} into multiples of ({dp},{},{rp}): {desc}",
            t.n
        );
        if out == Outcome3::Yes {
            if let Some((a, b)) = witness_pair(&atoms) {
                evidence.push_str(&format!(
                    "; witness: {} + {}",
                    ParamTriple::new(a * dp, t.n, a * rp),
                    ParamTriple::new(b * dp, t.n, b * rp)
                ));
            } else {
                evidence.push_str("; witness: a decomposition into three or more covered parts");
            }
        }
        (out, evidence)
    }

    fn atom_summary(
        &self,
        n: i128,
        dp: i128,
        rp: i128,
        atoms: &[Outcome3],
        field: Field,
        g: i128,
    ) -> String {
        let shown = atoms.len().min(8);
        let mut parts: Vec<String> = Vec::with_capacity(shown);
        for (i, &o) in atoms.iter().take(shown).enumerate() {
            let k = (i + 1) as i128;
            let atom = ParamTriple::new(k * dp, n, k * rp);
            let mut s = format!("{atom}: {o}");
            if k * rp == 1 && o == Outcome3::No {
                let (_, why) = self.etf_explained(k * dp, n, field);
                s.push_str(&format!(" ({why})"));
            } else if o == Outcome3::Unknown {
                s.push_str(" (undetermined by the catalog)");
            }
            parts.push(s);
        }
        if atoms.len() > shown {
            parts.push(format!("... {} atoms total", g - 1));
        }
        parts.join("; ")
    }

    fn rule_halving(&self, t: ParamTriple, field: Field, depth: u32) -> (Outcome3, String) {
        if t.d % 2 != 0 || t.r % 2 != 0 {
            return (Outcome3::No, odd_half_msg(t));
        }
        let half = ParamTriple::new(t.d / 2, t.n, t.r / 2);
        match field {
            Field::Real => {
                let o = self.ectff_rec(half, Field::Complex, depth + 1);
                let mut out = o;
                let mut ev = match o {
                    Outcome3::Yes => format!("doubling a complex equichordal family at {half}"),
                    Outcome3::Unknown => {
                        format!("a complex equichordal family at {half} is undetermined")
                    }
                    Outcome3::No => format!("no complex equichordal family known at {half}"),
                };
                if out != Outcome3::Yes && t.d % 4 == 0 && t.r % 4 == 0 {
                    let quarter = ParamTriple::new(t.d / 4, t.n, t.r / 4);
                    let (oq, whyq) = self.quat_ectff(quarter);
                    let combined = out.or(oq);
                    if combined != out {
                        ev = format!("quaternionic expansion: {whyq}");
                    }
                    out = combined;
                }
                (out, ev)
            }
            Field::Complex => {
                let (oq, whyq) = self.quat_ectff(half);
                let ev = match oq {
                    Outcome3::Yes => format!("doubling: {whyq}"),
                    _ => whyq,
                };
                (oq, ev)
            }
        }
    }

    fn rule_prime_triangular(&self, t: ParamTriple) -> (Outcome3, String) {
        let p = t.d;
        let no_shape = (
            Outcome3::No,
            "parameters do not match (P, P(P+1)/2, (P-1)/2) for an odd prime P".to_string(),
        );
        if p < 3 || !as_u64(p).is_some_and(is_prime) {
            return no_shape;
        }
        let Some(tri) = p.checked_mul(p + 1).map(|x| x / 2) else {
            return (
                Outcome3::Unknown,
                "parameters exceed the tabulated range".into(),
            );
        };
        if t.n != tri || 2 * t.r + 1 != p {
            return no_shape;
        }
        let h = ((p + 1) / 2) as u64;
        match self.hadamard_known(h) {
            Outcome3::Yes => (
                Outcome3::Yes,
                format!("P = {p}: a Hadamard matrix of order {h} is known, giving a real family"),
            ),
            Outcome3::No => (
                Outcome3::No,
                format!("P = {p}: no Hadamard matrix of order {h} ({h} is neither 1, 2, nor divisible by 4)"),
            ),
            Outcome3::Unknown => {
                (Outcome3::Unknown, format!("P = {p}: Hadamard order {h} is undetermined"))
            }
        }
    }

    fn rule_zauner(&self, t: ParamTriple) -> (Outcome3, String) {
        if t.d < t.n {
            return (Outcome3::No, format!("Fisher: B = {} < V = {}", t.d, t.n));
        }
        let (b, v) = (t.d, t.n);
        if (v * t.r) % b != 0 {
            return (
                Outcome3::No,
                format!("block size K = VR/B = {}/{b} is not an integer", v * t.r),
            );
        }
        let k = v * t.r / b;
        if k < 2 {
            return (
                Outcome3::No,
                "block size K = 1: single-point blocks span nothing".into(),
            );
        }
        if (t.r * (k - 1)) % (v - 1) != 0 {
            return (
                Outcome3::No,
                format!(
                    "pair count lambda = R(K-1)/(V-1) = {}/{} is not an integer",
                    t.r * (k - 1),
                    v - 1
                ),
            );
        }
        let lambda = t.r * (k - 1) / (v - 1);
        let (Some(vu), Some(ku), Some(lu)) = (as_u64(v), as_u64(k), as_u64(lambda)) else {
            return (
                Outcome3::Unknown,
                "parameters exceed the tabulated range".into(),
            );
        };
        let (o, why) = self.bibd_explained(vu, ku, lu);
        let ev = match o {
            Outcome3::Yes => format!(
                "spanning blocks of a 2-({v},{k},{lambda}) design give a real family ({why}); \
                 such families are never equi-isoclinic"
            ),
            _ => format!("needs a 2-({v},{k},{lambda}) design: {why}"),
        };
        (o, ev)
    }

    fn rule_wilson(&self, t: ParamTriple) -> (Outcome3, String) {
        let ctx = "recorded for context; not counted toward coverage";
        if t.r < 1 || t.d % t.r != 0 {
            return (
                Outcome3::No,
                format!("K = D/R = {}/{} is not an integer ({ctx})", t.d, t.r),
            );
        }
        let k = t.d / t.r;
        if k < 2 {
            return (
                Outcome3::No,
                format!("K = 1: the trivial one-block family ({ctx})"),
            );
        }
        if (t.r * k * (k - 1)) % (t.n - 1) != 0 {
            return (
                Outcome3::No,
                format!(
                    "lambda = RK(K-1)/(N-1) = {}/{} is not an integer ({ctx})",
                    t.r * k * (k - 1),
                    t.n - 1
                ),
            );
        }
        let lambda = t.r * k * (k - 1) / (t.n - 1);
        let q_pp = as_u64(t.n).is_some_and(is_prime_power);
        if q_pp {
            let qm1 = t.n - 1;
            let cond_a = (2 * t.r * k) % qm1 == 0 || (2 * t.r * (k - 1)) % qm1 == 0;
            let cond_b = t.r >= qm1;
            let cond_c = wilson_size_condition(t.n, k);
            if cond_a || cond_b || cond_c {
                let which = if cond_a {
                    "divisibility"
                } else if cond_b {
                    "large replication"
                } else {
                    "large field"
                };
                return (
                    Outcome3::Yes,
                    format!(
                        "Wilson's theorem builds a ({k},{lambda}) difference family over GF({}) \
                         with {} blocks, hence this family ({which} condition; {ctx})",
                        t.n, t.r
                    ),
                );
            }
        }
        if t.n <= 24 && k <= 5 {
            let (Some(nu), Some(lu)) = (as_u64(t.n), as_u64(lambda)) else {
                return (
                    Outcome3::Unknown,
                    format!("parameters exceed the search range ({ctx})"),
                );
            };
            let group = match AbelianGroup::cyclic(nu) {
                Ok(g) => g,
                Err(_) => {
                    return (
                        Outcome3::Unknown,
                        format!("group order out of range ({ctx})"),
                    )
                }
            };
            match designs::search_df(&group, k as usize, lu, 1) {
                Ok(found) if !found.is_empty() => {
                    return (
                        Outcome3::Yes,
                        format!(
                            "explicit ({k},{lambda}) difference family found in Z{} by search ({ctx})",
                            t.n
                        ),
                    );
                }
                Ok(_) => {
                    if is_prime(nu) {
                        return (
                            Outcome3::No,
                            format!(
                                "exhaustive search: no ({k},{lambda}) difference family in Z{}, \
                                 the only abelian group of that order ({ctx})",
                                t.n
                            ),
                        );
                    }
                    return (
                        Outcome3::Unknown,
                        format!(
                            "no ({k},{lambda}) difference family in the cyclic group; other \
                             groups of order {} unchecked ({ctx})",
                            t.n
                        ),
                    );
                }
                Err(_) => return (Outcome3::Unknown, format!("search not applicable ({ctx})")),
            }
        }
        (
            Outcome3::Unknown,
            format!("Wilson conditions inconclusive for K = {k}, lambda = {lambda} ({ctx})"),
        )
    }

    fn rule_king_dds(&self, t: ParamTriple) -> (Outcome3, String) {
        // A semiregular divisible difference set in a group G of order NR with
        // a subgroup of order N yields these parameters; integrality of both
        // index parameters is forced by the counting identities.
        let h = t.n;
        let Some(g_ord) = t.n.checked_mul(t.r) else {
            return (
                Outcome3::Unknown,
                "parameters exceed the tabulated range".into(),
            );
        };
        let Some(d2) = t.d.checked_mul(t.d) else {
            return (
                Outcome3::Unknown,
                "parameters exceed the tabulated range".into(),
            );
        };
        if d2 % g_ord != 0 {
            return (
                Outcome3::No,
                format!("lambda_2 = {d2}/{g_ord} is not an integer"),
            );
        }
        let lambda2 = d2 / g_ord;
        if t.d < t.r {
            return (Outcome3::No, "lambda_1 would be negative: D < R".into());
        }
        let numer = t.d * h * (t.d - t.r);
        let denom = g_ord * (h - 1);
        if numer % denom != 0 {
            return (
                Outcome3::No,
                format!("lambda_1 = {numer}/{denom} is not an integer"),
            );
        }
        let lambda1 = numer / denom;
        if let Some(ev) = self.king_patterns(t) {
            return (Outcome3::Yes, ev);
        }
        (
            Outcome3::Unknown,
            format!(
                "index parameters are integral (lambda_1 = {lambda1}, lambda_2 = {lambda2}) but \
                 no tabulated semiregular pattern matches"
            ),
        )
    }

    fn king_patterns(&self, t: ParamTriple) -> Option<String> {
        let n = as_u64(t.n)?;
        let p = prime_power_base(n)?;
        let e = power_exponent(t.n, p as i128)?;
        // (i): N = Q^I, R = Q^(2s) (Q^I - 1)/(Q - 1), D = Q^(I-1) R.
        for j in 1..=e {
            if e % j != 0 {
                continue;
            }
            let q = (p as i128).checked_pow(j)?;
            if q < 2 {
                continue;
            }
            let i_exp = e / j;
            let base = (t.n - 1) / (q - 1);
            if (q - 1) * base != t.n - 1 || t.r % base != 0 {
                continue;
            }
            let quot = t.r / base;
            if let Some(s2) = power_exponent(quot, q) {
                if s2 % 2 == 0 && t.d * q == t.n * t.r {
                    return Some(format!(
                        "semiregular pattern over the group of order {}: Q = {q}, I = {i_exp}",
                        t.n * t.r
                    ));
                }
            }
        }
        // (ii): N = Q^J, R = (Q^J - 1)/(Q - 1), D = L Q^(J-1) R with an
        // L-element difference set in the additive group of GF(Q).
        for j in 1..=e {
            if e % j != 0 {
                continue;
            }
            let q = (p as i128).checked_pow(j)?;
            if q < 2 {
                continue;
            }
            let j_exp = e / j;
            let base = (t.n - 1) / (q - 1);
            if (q - 1) * base != t.n - 1 || t.r != base {
                continue;
            }
            let scale = (t.n / q) * t.r;
            if scale == 0 || t.d % scale != 0 {
                continue;
            }
            let l = t.d / scale;
            if l < 1 || l > q {
                continue;
            }
            if l == 1 {
                return Some(format!(
                    "difference-set pattern: Q = {q}, J = {j_exp}, singleton difference set"
                ));
            }
            if l == q {
                return Some(format!(
                    "difference-set pattern: Q = {q}, J = {j_exp}, full-group difference set"
                ));
            }
            if q <= 32 {
                if let Some(true) = self.small_ds_exists(p, j as usize, l as u64) {
                    return Some(format!(
                        "difference-set pattern: Q = {q}, J = {j_exp}, {l}-element difference \
                         set found by search"
                    ));
                }
            }
        }
        // (iii): N = 3^(2J), R = 4, D = 2 (3^(2J) - 3^J).
        if t.r == 4 && p == 3 && e % 2 == 0 {
            let s = integer_sqrt(t.n);
            if s * s == t.n && t.d == 2 * (t.n - s) {
                return Some(format!("the ternary pattern at 3^J = {s}"));
            }
        }
        None
    }

    /// Exhaustive search for an L-element difference set in the elementary
    /// abelian group of order p^e (every difference set translates to one
    /// containing zero).
    fn small_ds_exists(&self, p: u64, e: usize, l: u64) -> Option<bool> {
        let group = AbelianGroup::new(vec![p; e]).ok()?;
        let order = group.order() as usize;
        let l = l as usize;
        if l > order {
            return Some(false);
        }
        if binomial((order - 1) as u64, (l - 1) as u64)? > 20_000 {
            return None;
        }
        let trivial = Subgroup::trivial(&group);
        let mut set: Vec<usize> = Vec::with_capacity(l);
        set.push(0);
        fn extend(
            group: &AbelianGroup,
            trivial: &Subgroup,
            set: &mut Vec<usize>,
            next: usize,
            l: usize,
            order: usize,
        ) -> bool {
            if set.len() == l {
                return matches!(
                    designs::verify_dds(group, trivial, set.as_slice()),
                    Ok(Some(_))
                );
            }
            for cand in next..order {
                set.push(cand);
                if extend(group, trivial, set, cand + 1, l, order) {
                    return true;
                }
                set.pop();
            }
            false
        }
        Some(extend(&group, &trivial, &mut set, 1, l, order))
    }

    fn rule_planar(&self, t: ParamTriple, field: Field) -> (Outcome3, String) {
        let q = t.r;
        let shape =
            t.d == t.n && q >= 3 && t.d == q * q - q + 1 && as_u64(q).is_some_and(is_prime_power);
        if !shape {
            return (
                Outcome3::No,
                "parameters do not match (Q^2-Q+1, Q^2-Q+1, Q) for a prime power Q >= 3".into(),
            );
        }
        match field {
            Field::Complex => (
                Outcome3::Yes,
                format!("planar difference construction at Q = {q}"),
            ),
            Field::Real => {
                if q % 2 == 1 {
                    (
                        Outcome3::Yes,
                        format!("planar difference construction at odd Q = {q} is real"),
                    )
                } else {
                    (
                        Outcome3::Unknown,
                        format!("the planar construction at even Q = {q} is complex; a real form is undetermined"),
                    )
                }
            }
        }
    }

    fn rule_power_of_two(&self, t: ParamTriple) -> (Outcome3, String) {
        let no_shape = (
            Outcome3::No,
            "parameters do not match the power-of-two family on 2^(2J) subspaces".to_string(),
        );
        let s = integer_sqrt(t.n);
        if s < 4 || s * s != t.n || power_exponent(s, 2).is_none() {
            return no_shape;
        }
        // s = 2^J with J >= 2.
        for eps in [1i128, -1] {
            let d = (s / 2) * (s + eps);
            let r_num = (s / 2) * (s + 3 * eps) + 1;
            debug_assert_eq!(r_num % 3, 0);
            if t.d == d && t.r == r_num / 3 {
                return (
                    Outcome3::Yes,
                    format!("power-of-two family: 2^J = {s}, epsilon = {eps}, real"),
                );
            }
        }
        no_shape
    }

    fn rule_sporadic(&self, t: ParamTriple) -> (Outcome3, String) {
        if self.ectff_real_sporadic.contains(&(t.d, t.n, t.r)) {
            return (Outcome3::Yes, "tabulated sporadic real family".into());
        }
        for &(d, r, lo, hi) in &self.ectff_real_ranges {
            if t.d == d && t.r == r && lo <= t.n && t.n <= hi {
                return (
                    Outcome3::Yes,
                    format!("within the tabulated numerical range D = {d}, R = {r}, N in [{lo}, {hi}] (real)"),
                );
            }
        }
        (Outcome3::No, "not in the sporadic tables".into())
    }

    // ---- certification ----

    pub fn certify(
        &self,
        t: ParamTriple,
        field: Field,
    ) -> Result<CertificationReport, CatalogError> {
        let class = triples::classify(t)?;
        let f = t.invariant().map_err(CatalogError::from)?;
        let exist = triples::tff_exists(t)?;
        let mut rules = Vec::new();
        let verdict;
        let summary;
        if f < 0 {
            verdict = Verdict::SettledByFNeg;
            summary = match (exist.exists, exist.seed) {
                (true, Some(seed)) => format!(
                    "invariant {f} < 0: existence is settled by the complete characterization; \
                     the only tight fusion frames here descend from the degenerate seed {seed} \
                     and the equichordal question is settled with them"
                ),
                _ => format!(
                    "invariant {f} < 0: existence is settled by the complete characterization; \
                     no tight fusion frame exists at these parameters"
                ),
            };
        } else {
            for rule in CatalogRule::ALL {
                let (outcome, evidence) = self.rule_eval(rule, t, field, class.minimal_point, 0);
                rules.push(RuleOutcome {
                    rule,
                    outcome,
                    novelty_relevant: rule.novelty_relevant(),
                    evidence,
                });
            }
            let yes: Vec<&RuleOutcome> = rules
                .iter()
                .filter(|r| r.novelty_relevant && r.outcome == Outcome3::Yes)
                .collect();
            let unknown: Vec<&RuleOutcome> = rules
                .iter()
                .filter(|r| r.novelty_relevant && r.outcome == Outcome3::Unknown)
                .collect();
            let negative = class.minimal_point.and_then(|m0| {
                if m0.r != 1 {
                    return None;
                }
                let (o, why) = self.etf_explained(m0.d, t.n, field);
                if o == Outcome3::No {
                    Some((m0, why))
                } else {
                    None
                }
            });
            if !yes.is_empty() {
                verdict = Verdict::CoveredByCatalog;
                let names: Vec<String> = yes
                    .iter()
                    .map(|r| format!("{} ({})", r.rule.id(), r.rule.title()))
                    .collect();
                summary = format!("covered by {}", names.join(", "));
            } else if let Some((m0, why)) = negative {
                verdict = Verdict::SettledNegative;
                summary = format!(
                    "the orbit minimum {m0} has rank one and no ETF({}, {}) exists over {field} \
                     ({why}); complements preserve equichordality, so no equichordal tight fusion \
                     frame exists anywhere on this orbit",
                    m0.d, t.n
                );
            } else if !unknown.is_empty() {
                verdict = Verdict::Indeterminate;
                let names: Vec<&str> = unknown.iter().map(|r| r.rule.id()).collect();
                summary = format!(
                    "rules {} are undetermined: the catalog can neither cover nor clear the triple",
                    names.join(", ")
                );
            } else {
                verdict = Verdict::Novel;
                summary = "every novelty-relevant rule conclusively fails to reach these \
                           parameters: new relative to this catalog"
                    .into();
            }
        }
        Ok(CertificationReport {
            query: t,
            field,
            invariant: f,
            orbit_tag: class.tag,
            minimal_point: class.minimal_point,
            tff_exists: exist.exists,
            verdict,
            summary,
            rules,
            catalog_schema: self.schema.clone(),
            catalog_hash: self.content_hash.clone(),
        })
    }

    fn cache_get(&self, key: &CacheKey) -> Option<Outcome3> {
        let guard = self.cache.lock().unwrap_or_else(|p| p.into_inner());
        guard.get(key).copied()
    }

    fn cache_put(&self, key: CacheKey, value: Outcome3) {
        let mut guard = self.cache.lock().unwrap_or_else(|p| p.into_inner());
        guard.insert(key, value);
    }
}

/// The (2R,4,R) equi-isoclinic parity rule in isolation: `None` off the
/// shape, otherwise the field-dependent answer.
pub fn eitff_parity_rule(t: ParamTriple, field: Field) -> Option<Outcome3> {
    if t.n != 4 || t.r < 1 || t.d != 2 * t.r {
        return None;
    }
    Some(match field {
        Field::Complex => Outcome3::Yes,
        Field::Real => Outcome3::from_bool(t.r % 2 == 0),
    })
}

/// Kleene coverage of total weight `atoms.len() + 1` by parts of weight
/// `1..=atoms.len()`; capping parts below the total forces at least two.
fn sum_coverage(atoms: &[Outcome3]) -> Outcome3 {
    let m = atoms.len() + 1;
    let mut cov = vec![Outcome3::No; m + 1];
    for j in 1..=m {
        let mut acc = Outcome3::No;
        for k in 1..=j.min(m - 1) {
            let rest = if k == j { Outcome3::Yes } else { cov[j - k] };
            acc = acc.or(atoms[k - 1].and(rest));
        }
        cov[j] = acc;
    }
    cov[m]
}

fn witness_pair(atoms: &[Outcome3]) -> Option<(i128, i128)> {
    let m = atoms.len() + 1;
    for a in 1..m {
        let b = m - a;
        if b < a {
            break;
        }
        if b <= atoms.len() && atoms[a - 1] == Outcome3::Yes && atoms[b - 1] == Outcome3::Yes {
            return Some((a as i128, b as i128));
        }
    }
    None
}

fn odd_half_msg(t: ParamTriple) -> String {
    if t.r % 2 != 0 {
        format!("halving requires even D and R; R = {} is odd", t.r)
    } else {
        format!("halving requires even D and R; D = {} is odd", t.d)
    }
}

/// Both real angle parameters sqrt(D(N-1)/(N-D)) and sqrt((N-D)(N-1)/D) must
/// be odd integers when D+1 < N != 2D.
fn real_integrality_obstruction(d: i128, n: i128) -> Option<String> {
    let checks = [
        (d * (n - 1), n - d, "D(N-1)/(N-D)"),
        ((n - d) * (n - 1), d, "(N-D)(N-1)/D"),
    ];
    for (num, den, label) in checks {
        if den <= 0 {
            return None;
        }
        if num % den != 0 {
            return Some(format!(
                "real angle parameter {label} = {num}/{den} is not an integer"
            ));
        }
        let val = num / den;
        let root = integer_sqrt(val);
        if root * root != val {
            return Some(format!(
                "real angle parameter {label} = {val} is not a perfect square"
            ));
        }
        if root % 2 == 0 {
            return Some(format!(
                "real angle parameter sqrt({label}) = {root} is even, not odd"
            ));
        }
    }
    None
}

fn wilson_size_condition(q: i128, k: i128) -> bool {
    // q > [k(k-1)/2]^(k(k-1))
    let base = (k * (k - 1) / 2) as u128;
    let exp = (k * (k - 1)) as u32;
    if base <= 1 {
        return q > 1;
    }
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = match acc.checked_mul(base) {
            Some(x) => x,
            None => return false,
        };
        if acc >= i128::MAX as u128 {
            return false;
        }
    }
    q > acc as i128
}

fn hadamard_closure(extra: &[u64]) -> BTreeSet<u64> {
    let mut set: BTreeSet<u64> = BTreeSet::new();
    set.insert(1);
    set.insert(2);
    for &x in extra {
        if (1..=HADAMARD_LIMIT).contains(&x) {
            set.insert(x);
        }
    }
    for q in 3..HADAMARD_LIMIT {
        if is_prime_power(q) {
            if q % 4 == 3 && q < HADAMARD_LIMIT {
                set.insert(q + 1);
            }
            if q % 4 == 1 && 2 * (q + 1) <= HADAMARD_LIMIT {
                set.insert(2 * (q + 1));
            }
        }
    }
    loop {
        let snapshot: Vec<u64> = set.iter().copied().collect();
        let before = set.len();
        for &a in &snapshot {
            for &b in &snapshot {
                if let Some(p) = a.checked_mul(b) {
                    if p <= HADAMARD_LIMIT {
                        set.insert(p);
                    }
                }
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

pub fn is_prime_power(x: u64) -> bool {
    prime_power_base(x).is_some()
}

pub fn is_prime(x: u64) -> bool {
    prime_power_base(x) == Some(x)
}

/// The unique prime p with x = p^k, if any.
pub fn prime_power_base(x: u64) -> Option<u64> {
    if x < 2 {
        return None;
    }
    let mut p = 0u64;
    let mut d = 2u64;
    while d.saturating_mul(d) <= x {
        if x % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    if p == 0 {
        return Some(x);
    }
    let mut y = x;
    while y % p == 0 {
        y /= p;
    }
    if y == 1 {
        Some(p)
    } else {
        None
    }
}

fn power_exponent(mut x: i128, base: i128) -> Option<u32> {
    if base < 2 || x < 1 {
        return None;
    }
    let mut e = 0u32;
    while x > 1 {
        if x % base != 0 {
            return None;
        }
        x /= base;
        e += 1;
    }
    Some(e)
}

fn integer_sqrt(x: i128) -> i128 {
    if x < 2 {
        return x.max(0);
    }
    let mut guess = (x as f64).sqrt() as i128;
    while guess * guess > x {
        guess -= 1;
    }
    while (guess + 1) * (guess + 1) <= x {
        guess += 1;
    }
    guess
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - k + i + 1) as u128)? / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn as_u64(x: i128) -> Option<u64> {
    u64::try_from(x).ok()
}

fn hex(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}
