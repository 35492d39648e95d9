//! Acceptance gate. Each numbered criterion prints exactly one PASS or FAIL
//! line; the process exits nonzero if any fail. Runs without the libtest
//! harness so every line is printed even when an early criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ectff_core::catalog::{Catalog, CatalogRule, Outcome3, Verdict};
use ectff_core::designs::{search_df, Bibd, DifferenceFamily};
use ectff_core::frames::{construct_2r_4_r, construct_zauner};
use ectff_core::groups::{AbelianGroup, Subgroup};
use ectff_core::harmonic::{self, HarmonicSpec};
use ectff_core::tol::{TOL_ANGLE_PAD, TOL_CONV_REL, TOL_FOURIER, TOL_GRAM};
use ectff_core::triples::{self, ParamTriple};
use ectff_core::Field;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if $cond {
        } else {
            // NaN comparisons land here too, which is the failure we want.
            return Err(format!($($arg)+));
        }
    };
}

fn s<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn main() {
    type Check = fn() -> Result<(), String>;
    let criteria: [(&str, Check); 12] = [
        ("orbit windows reproduce the reference chains", criterion_01),
        (
            "involutions preserve the invariant and self-invert",
            criterion_02,
        ),
        ("every window holds exactly one minimal point", criterion_03),
        ("existence oracle matches the closed forms", criterion_04),
        ("harmonic (6,13,2) from the (13,3,1) family", criterion_05),
        (
            "searched (19,3,1) family yields a novel (9,19,3)",
            criterion_06,
        ),
        ("combinatorial flags agree with the numerics", criterion_07),
        (
            "complements verify and pad the principal angles",
            criterion_08,
        ),
        ("four-block isoclinic family at cos^2 = 1/3", criterion_09),
        (
            "block-design frame (6,4,3) is chordal, not isoclinic",
            criterion_10,
        ),
        (
            "group Fourier identities hold at pinned tolerances",
            criterion_11,
        ),
        (
            "certification regressions and batch throughput",
            criterion_12,
        ),
    ];

    let mut failed = 0u32;
    for (idx, (name, body)) in criteria.into_iter().enumerate() {
        let num = idx + 1;
        match catch_unwind(AssertUnwindSafe(body)) {
            Ok(Ok(())) => println!("[criterion {num:02}] PASS  {name}"),
            Ok(Err(msg)) => {
                failed += 1;
                println!("[criterion {num:02}] FAIL  {name}: {msg}");
            }
            Err(payload) => {
                failed += 1;
                let msg = payload
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| payload.downcast_ref::<&str>().map(|m| m.to_string()))
                    .unwrap_or_else(|| "panicked".to_string());
                println!("[criterion {num:02}] FAIL  {name}: panic: {msg}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} of 12 acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 12 acceptance criteria hold");
}

fn t(d: i128, n: i128, r: i128) -> ParamTriple {
    ParamTriple::new(d, n, r)
}

/// Three fixed windows, checked entry for entry, then timed warm.
fn criterion_01() -> Result<(), String> {
    let expect_371 = [
        (11, 7, 9),
        (11, 7, 2),
        (3, 7, 2),
        (3, 7, 1),
        (4, 7, 1),
        (4, 7, 3),
        (17, 7, 3),
    ];
    let expect_141 = [
        (1, 4, 1),
        (3, 4, 1),
        (3, 4, 2),
        (5, 4, 2),
        (5, 4, 3),
        (7, 4, 3),
        (7, 4, 4),
    ];
    let expect_441 = [
        (16, 4, 7),
        (12, 4, 7),
        (12, 4, 5),
        (8, 4, 5),
        (8, 4, 3),
        (4, 4, 3),
        (4, 4, 1),
    ];
    let runs = [
        (t(3, 7, 1), -3, 3, expect_371),
        (t(1, 4, 1), 0, 6, expect_141),
        (t(4, 4, 1), -6, 0, expect_441),
    ];
    for (anchor, lo, hi, want) in &runs {
        let got = s(triples::sequence(*anchor, *lo, *hi))?;
        let want: Vec<ParamTriple> = want.iter().map(|&(d, n, r)| t(d, n, r)).collect();
        ensure!(
            got == want,
            "window [{lo},{hi}] around {anchor} mismatch: got {got:?}"
        );
    }
    let start = Instant::now();
    for (anchor, lo, hi, _) in &runs {
        s(triples::sequence(*anchor, *lo, *hi))?;
    }
    let elapsed = start.elapsed();
    ensure!(
        elapsed < Duration::from_millis(1),
        "warm windows took {elapsed:?}, budget 1 ms"
    );
    Ok(())
}

/// 10^5 random triples: both moves preserve the invariant exactly and are
/// involutions, including on degenerate and negative inputs.
fn criterion_02() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for _ in 0..100_000 {
        let d = rng.gen_range(-1_000_000i128..=1_000_000);
        let n = rng.gen_range(2i128..=1000);
        let r = rng.gen_range(-1_000_000i128..=1_000_000);
        let x = t(d, n, r);
        let f = s(x.invariant())?;
        let nu = s(x.naimark())?;
        let sg = s(x.spatial())?;
        ensure!(s(nu.invariant())? == f, "naimark changed f at {x}");
        ensure!(s(sg.invariant())? == f, "spatial changed f at {x}");
        ensure!(s(nu.naimark())? == x, "naimark not an involution at {x}");
        ensure!(s(sg.spatial())? == x, "spatial not an involution at {x}");
    }
    Ok(())
}

/// 10^4 random positive-invariant minimal points: walk out up to 8 steps,
/// then the 17-entry window around the offset anchor contains the minimal
/// point exactly once and no smaller entries anywhere.
fn criterion_03() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..10_000 {
        let n = rng.gen_range(5i128..=50);
        let r0 = rng.gen_range(1i128..=100);
        let d0 = rng.gen_range(2 * r0..=n * r0 / 2);
        let m = t(d0, n, r0);
        let f = s(m.invariant())?;
        ensure!(f > 0, "sampled {m} has f = {f}, expected positive");
        ensure!(s(m.is_minimal())?, "sampled {m} is not minimal");

        let j: i32 = rng.gen_range(-8..=8);
        let anchor = if j >= 0 {
            let chain = s(triples::sequence(m, 0, j))?;
            chain[j as usize]
        } else {
            let chain = s(triples::sequence(m, j, 0))?;
            chain[0]
        };
        let window = s(triples::sequence(anchor, -8, 8))?;
        ensure!(
            window.len() == 17,
            "window around {anchor} has {} entries",
            window.len()
        );

        let mut hits = Vec::new();
        for w in &window {
            if s(w.is_minimal())? {
                hits.push(*w);
            }
        }
        // A fixed point of one move can repeat the minimum at adjacent
        // indices; distinct minima must still be unique.
        ensure!(
            !hits.is_empty(),
            "no minimal entry in window around {anchor}"
        );
        ensure!(
            hits.iter().all(|h| *h == m),
            "window around {anchor} holds a second minimal point {:?}",
            hits
        );
        for w in &window {
            ensure!(
                w.d >= m.d && w.r >= m.r,
                "window entry {w} beats the minimum {m} entrywise"
            );
        }
    }
    Ok(())
}

/// Existence oracle: fixed positives and negatives, the (2R,4,R) family,
/// and full agreement with the two-block and three-block closed forms.
fn criterion_04() -> Result<(), String> {
    let exists = |d: i128, n: i128, r: i128| -> Result<bool, String> {
        Ok(s(triples::tff_exists(t(d, n, r)))?.exists)
    };
    ensure!(!exists(7, 4, 2)?, "(7,4,2) slipped through the oracle");
    ensure!(!exists(5, 4, 4)?, "(5,4,4) slipped through the oracle");
    ensure!(exists(5, 4, 2)?, "(5,4,2) should reach the seed (1,4,1)");
    for r in 1..=40i128 {
        ensure!(exists(2 * r, 4, r)?, "(2R,4,R) failed at R = {r}");
    }
    for d in 1..=60i128 {
        for r in 1..=d + 3 {
            let want2 = 2 * r == d || r == d;
            ensure!(
                exists(d, 2, r)? == want2,
                "two-block oracle disagrees at ({d},2,{r}), want {want2}"
            );
            let want3 = 3 * r == d || 2 * r == d || 3 * r == 2 * d || r == d;
            ensure!(
                exists(d, 3, r)? == want3,
                "three-block oracle disagrees at ({d},3,{r}), want {want3}"
            );
        }
    }
    Ok(())
}

fn df_13_3_1() -> Result<DifferenceFamily, String> {
    let z13 = s(AbelianGroup::cyclic(13))?;
    s(DifferenceFamily::new(
        z13,
        vec![vec![1, 3, 9], vec![2, 6, 5]],
    ))?
    .ok_or_else(|| "the (13,3,1) blocks failed the difference count check".to_string())
}

/// The classic (13,3,1) family lifts to a (6,13,2) frame: tight, chordal,
/// not isoclinic, pair traces exactly 5/9, all inside one second.
fn criterion_05() -> Result<(), String> {
    let start = Instant::now();
    let df = df_13_3_1()?;
    let result = s(harmonic::from_df(&df))?;
    let frame = &result.frame;
    let dims = (frame.dim(), frame.num_blocks(), frame.subspace_dim());
    ensure!(
        dims == (6, 13, 2),
        "frame has shape {dims:?}, want (6, 13, 2)"
    );

    let rep = frame.verify(1e-9);
    ensure!(
        rep.tight,
        "frame is not tight, residual {}",
        rep.tight_residual
    );
    ensure!(
        rep.tight_residual < 1e-10,
        "tightness residual {} exceeds 1e-10",
        rep.tight_residual
    );
    ensure!(rep.equichordal, "frame is not equichordal");
    ensure!(!rep.equiisoclinic, "frame should not be equi-isoclinic");

    let target = 5.0 / 9.0;
    ensure!(
        (rep.pair_trace_min - target).abs() <= 1e-10
            && (rep.pair_trace_max - target).abs() <= 1e-10,
        "pair traces [{}, {}] differ from 5/9",
        rep.pair_trace_min,
        rep.pair_trace_max
    );
    // Independent check on one pair straight from the cross Gram.
    let tr: f64 = frame.cross_gram(0, 1).iter().map(|z| z.norm_sqr()).sum();
    ensure!(
        (tr - target).abs() <= 1e-10,
        "pair (0,1) trace {tr} differs from 5/9"
    );

    let elapsed = start.elapsed();
    ensure!(
        elapsed < Duration::from_secs(1),
        "took {elapsed:?}, budget 1 s"
    );
    Ok(())
}

/// Search finds a (19,3,1) family quickly; the lifted (9,19,3) frame
/// verifies, carries invariant 261, and certifies as novel with the four
/// expected rejection markers in the evidence trail.
fn criterion_06() -> Result<(), String> {
    let z19 = s(AbelianGroup::cyclic(19))?;
    let start = Instant::now();
    let families = s(search_df(&z19, 3, 1, 1))?;
    let search_time = start.elapsed();
    ensure!(!families.is_empty(), "no (19,3,1) difference family found");
    ensure!(
        search_time < Duration::from_secs(60),
        "search took {search_time:?}, budget 60 s"
    );

    let result = s(harmonic::from_df(&families[0]))?;
    let frame = &result.frame;
    let dims = (frame.dim(), frame.num_blocks(), frame.subspace_dim());
    ensure!(
        dims == (9, 19, 3),
        "frame has shape {dims:?}, want (9, 19, 3)"
    );
    let rep = frame.verify(1e-9);
    ensure!(
        rep.tight && rep.equichordal,
        "lifted (9,19,3) frame failed verification"
    );

    let f = s(t(9, 19, 3).invariant())?;
    ensure!(f == 261, "invariant of (9,19,3) is {f}, want 261");

    let catalog = Catalog::embedded();
    let report = s(catalog.certify(t(9, 19, 3), Field::Complex))?;
    ensure!(
        report.verdict == Verdict::Novel,
        "(9,19,3) certified {} instead of novel",
        report.verdict
    );
    let trail: String = report
        .rules
        .iter()
        .map(|r| r.evidence.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    for marker in [
        "Gerzon",
        "odd",
        "Fisher",
        "lambda_2 = 81/57 is not an integer",
    ] {
        ensure!(trail.contains(marker), "evidence trail lacks {marker:?}");
    }
    Ok(())
}

fn all_subgroups(g: &AbelianGroup) -> Result<Vec<Subgroup>, String> {
    let n = g.order() as usize;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    // Rank at most 3 at these orders, so generator triples reach everything.
    for a in 0..n {
        for b in a..n {
            for c in b..n {
                let h = s(Subgroup::from_generators(g, &[a, b, c]))?;
                if seen.insert(h.elements().to_vec()) {
                    out.push(h);
                }
            }
        }
    }
    Ok(out)
}

/// For every subgroup of index at most 8 in every abelian group of order
/// 2 through 12, and every subset with constant coset cardinality, the
/// builder's internal cross-check of combinatorial flags against numerical
/// verification never trips. Larger groups are spot-checked by seeded
/// sampling; a full sweep at those orders is out of reach.
fn criterion_07() -> Result<(), String> {
    let mut built = 0usize;
    let mut df_seen = 0usize;
    let mut ds_seen = 0usize;

    let shapes: [&[u64]; 16] = [
        &[2],
        &[3],
        &[4],
        &[2, 2],
        &[5],
        &[6],
        &[7],
        &[8],
        &[2, 4],
        &[2, 2, 2],
        &[9],
        &[3, 3],
        &[10],
        &[11],
        &[12],
        &[2, 6],
    ];
    for moduli in shapes {
        let g = s(AbelianGroup::new(moduli.to_vec()))?;
        let order = g.order() as usize;
        for h in all_subgroups(&g)? {
            if g.order() / h.order() > 8 {
                continue;
            }
            for mask in 1u32..(1u32 << order) {
                let subset: Vec<usize> = (0..order).filter(|i| mask >> i & 1 == 1).collect();
                let parts = h.partition(&subset);
                let card = parts[0].1.len();
                if parts.iter().any(|(_, members)| members.len() != card) {
                    continue;
                }
                let spec = s(HarmonicSpec::new(g.clone(), h.clone(), subset.clone()))?;
                match spec.build() {
                    Ok(res) => {
                        built += 1;
                        if res.is_df {
                            df_seen += 1;
                        }
                        if res.is_ds_each {
                            ds_seen += 1;
                        }
                    }
                    Err(e) => {
                        return Err(format!(
                            "build failed on |G| = {order}, H order {}, subset {subset:?}: {e}",
                            h.order()
                        ));
                    }
                }
            }
        }
    }
    ensure!(
        built >= 10_000,
        "exhaustive sweep built only {built} frames, expected at least 10000"
    );

    // Seeded spot checks at orders 16, 26, 27, 32.
    let sampled: [(&[u64], &[usize]); 5] = [
        (&[16], &[2]),
        (&[16], &[4]),
        (&[26], &[2]),
        (&[27], &[3]),
        (&[32], &[4]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    for (moduli, gens) in sampled {
        let g = s(AbelianGroup::new(moduli.to_vec()))?;
        let h = s(Subgroup::from_generators(&g, gens))?;
        let cosets = h.cosets();
        let coset_size = cosets[0].len();
        for _ in 0..40 {
            let k = rng.gen_range(1..=coset_size);
            let mut subset = Vec::new();
            for coset in &cosets {
                let mut pool = coset.clone();
                for i in 0..k {
                    let swap_with = rng.gen_range(i..pool.len());
                    pool.swap(i, swap_with);
                }
                subset.extend_from_slice(&pool[..k]);
            }
            subset.sort_unstable();
            let spec = s(HarmonicSpec::new(g.clone(), h.clone(), subset.clone()))?;
            match spec.build() {
                Ok(res) => {
                    built += 1;
                    if res.is_df {
                        df_seen += 1;
                    }
                    if res.is_ds_each {
                        ds_seen += 1;
                    }
                }
                Err(e) => {
                    return Err(format!(
                        "sampled build failed on order {}, subset {subset:?}: {e}",
                        g.order()
                    ));
                }
            }
        }
    }

    ensure!(
        df_seen >= 100 && ds_seen >= 100,
        "flag coverage too thin: {df_seen} family hits, {ds_seen} per-block hits over {built} builds"
    );
    Ok(())
}

/// Both complements of the (6,13,2) frame verify, and the spatial
/// complement's principal angles are the originals padded with two
/// right angles of the squared-cosine table (entries at 1).
fn criterion_08() -> Result<(), String> {
    let base = s(harmonic::from_df(&df_13_3_1()?))?.frame;

    let nai = s(base.naimark_complement())?;
    let dims = (nai.dim(), nai.num_blocks(), nai.subspace_dim());
    ensure!(
        dims == (20, 13, 2),
        "spectral complement has shape {dims:?}, want (20, 13, 2)"
    );
    let rep = nai.verify(1e-9);
    ensure!(
        rep.tight && rep.equichordal,
        "spectral complement failed verification"
    );

    let spa = s(base.spatial_complement())?;
    let dims = (spa.dim(), spa.num_blocks(), spa.subspace_dim());
    ensure!(
        dims == (6, 13, 4),
        "orthogonal complement has shape {dims:?}, want (6, 13, 4)"
    );
    let rep = spa.verify(1e-9);
    ensure!(
        rep.tight && rep.equichordal,
        "orthogonal complement failed verification"
    );

    for i in 0..13 {
        for j in (i + 1)..13 {
            let orig = base.principal_angles(i, j);
            let comp = spa.principal_angles(i, j);
            ensure!(
                orig.len() == 2 && comp.len() == 4,
                "angle lists for pair ({i},{j}) have lengths {} and {}",
                orig.len(),
                comp.len()
            );
            for (k, c) in comp[..2].iter().enumerate() {
                ensure!(
                    (c - 1.0).abs() <= TOL_ANGLE_PAD,
                    "pad entry {k} of pair ({i},{j}) is {c}, want 1"
                );
            }
            for (k, (c, o)) in comp[2..].iter().zip(&orig).enumerate() {
                ensure!(
                    (c - o).abs() <= TOL_ANGLE_PAD,
                    "entry {k} of pair ({i},{j}) drifted: complement {c} vs base {o}"
                );
            }
        }
    }
    Ok(())
}

/// The four-block isoclinic family: complex for every R up to 6 with all
/// squared cosines at 1/3, real for even R, and a refusal naming the parity
/// condition for odd R.
fn criterion_09() -> Result<(), String> {
    for r in 1..=6usize {
        let frame = s(construct_2r_4_r(r, Field::Complex))?;
        let rep = frame.verify(1e-9);
        ensure!(
            rep.tight && rep.equiisoclinic,
            "complex R = {r} frame is not isoclinic"
        );
        for pair in &rep.principal_angle_table {
            for c in &pair.cos2 {
                ensure!(
                    (c - 1.0 / 3.0).abs() <= 1e-10,
                    "complex R = {r} pair ({},{}) has cos^2 {c}, want 1/3",
                    pair.i,
                    pair.j
                );
            }
        }
    }
    for r in [2usize, 4, 6] {
        let frame = s(construct_2r_4_r(r, Field::Real))?;
        ensure!(frame.field() == Field::Real, "R = {r} frame is not real");
        ensure!(
            frame.max_imag() <= 1e-12,
            "R = {r} frame has imaginary residue {}",
            frame.max_imag()
        );
        let rep = frame.verify(1e-9);
        ensure!(
            rep.tight && rep.equiisoclinic,
            "real R = {r} frame is not isoclinic"
        );
    }
    for r in [1usize, 3, 5] {
        match construct_2r_4_r(r, Field::Real) {
            Ok(_) => return Err(format!("real R = {r} should be refused")),
            Err(e) => {
                let msg = e.to_string();
                ensure!(
                    msg.contains("even"),
                    "refusal for R = {r} does not name the parity condition: {msg}"
                );
            }
        }
    }
    Ok(())
}

/// Spanning the pair blocks of the complete design on four points gives the
/// (6,4,3) frame: tight at constant 2, chordal with unit pair traces, not
/// isoclinic, squared cosines 1, 0, 0 on every pair.
fn criterion_10() -> Result<(), String> {
    let design = s(Bibd::complete(4, 2))?;
    let frame = s(construct_zauner(&design))?;
    let dims = (frame.dim(), frame.num_blocks(), frame.subspace_dim());
    ensure!(
        dims == (6, 4, 3),
        "frame has shape {dims:?}, want (6, 4, 3)"
    );
    ensure!(
        frame.num_blocks() * frame.subspace_dim() == 2 * frame.dim(),
        "tight constant is not 2"
    );

    let rep = frame.verify(1e-9);
    ensure!(
        rep.tight,
        "frame is not tight, residual {}",
        rep.tight_residual
    );
    ensure!(rep.equichordal, "frame is not equichordal");
    ensure!(!rep.equiisoclinic, "frame should not be equi-isoclinic");
    ensure!(
        (rep.trace_target - 1.0).abs() <= 1e-12,
        "trace target {} is not 1",
        rep.trace_target
    );
    ensure!(
        (rep.pair_trace_min - 1.0).abs() <= 1e-10 && (rep.pair_trace_max - 1.0).abs() <= 1e-10,
        "pair traces [{}, {}] differ from 1",
        rep.pair_trace_min,
        rep.pair_trace_max
    );
    for pair in &rep.principal_angle_table {
        ensure!(
            pair.cos2.len() == 3,
            "pair ({},{}) has {} angles",
            pair.i,
            pair.j,
            pair.cos2.len()
        );
        let want = [1.0, 0.0, 0.0];
        for (c, w) in pair.cos2.iter().zip(want) {
            ensure!(
                (c - w).abs() <= 1e-10,
                "pair ({},{}) has cos^2 {:?}, want [1, 0, 0]",
                pair.i,
                pair.j,
                pair.cos2
            );
        }
    }
    Ok(())
}

/// Character orthogonality, subgroup summation, the convolution theorem,
/// and the subset Gram identity, over a matrix of groups up to order 64.
fn criterion_11() -> Result<(), String> {
    let shapes: Vec<Vec<u64>> = vec![
        vec![2],
        vec![3],
        vec![4],
        vec![5],
        vec![7],
        vec![8],
        vec![9],
        vec![12],
        vec![13],
        vec![16],
        vec![19],
        vec![24],
        vec![26],
        vec![27],
        vec![32],
        vec![37],
        vec![48],
        vec![64],
        vec![2, 2],
        vec![2, 4],
        vec![3, 3],
        vec![2, 2, 2],
        vec![4, 4],
        vec![2, 6],
        vec![3, 9],
        vec![6, 6],
        vec![2, 32],
        vec![8, 8],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_000b);
    for moduli in &shapes {
        let g = s(AbelianGroup::new(moduli.clone()))?;
        let n = g.order() as usize;
        let scale = n as f64;

        // Orthogonality of the character table rows.
        for a in 0..n {
            for b in 0..n {
                let sum: Complex64 = (0..n)
                    .map(|x| g.character_value(a, x) * g.character_value(b, x).conj())
                    .sum();
                let want = if a == b { scale } else { 0.0 };
                ensure!(
                    (sum - want).norm() <= TOL_FOURIER * scale,
                    "character rows {a}, {b} of {moduli:?} pair to {sum}"
                );
            }
        }

        // Summing a function over a subgroup equals averaging its transform
        // over the annihilator, up to the index factor.
        let f: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let fhat = s(g.dft(&f))?;
        for gen_count in 1..=2usize {
            let gens: Vec<usize> = (0..gen_count).map(|_| rng.gen_range(0..n)).collect();
            let h = s(Subgroup::from_generators(&g, &gens))?;
            let lhs: Complex64 = h.elements().iter().map(|&x| f[x]).sum();
            let ann = h.annihilator();
            let rhs: Complex64 = ann.elements().iter().map(|&a| fhat[a]).sum();
            let rhs = rhs * (h.order() as f64 / scale);
            ensure!(
                (lhs - rhs).norm() <= TOL_FOURIER * scale,
                "subgroup summation fails on {moduli:?} with H order {}",
                h.order()
            );
        }

        // Convolution theorem, relative error.
        let x: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let y: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let conv = s(g.convolve(&x, &y))?;
        let chat = s(g.dft(&conv))?;
        let xhat = s(g.dft(&x))?;
        let yhat = s(g.dft(&y))?;
        for a in 0..n {
            let want = xhat[a] * yhat[a];
            let err = (chat[a] - want).norm();
            ensure!(
                err <= TOL_CONV_REL * (1.0 + want.norm()),
                "convolution theorem fails at row {a} of {moduli:?}: error {err}"
            );
        }

        // Subset Gram entries against the transform of the indicator.
        for _ in 0..3 {
            let size = rng.gen_range(1..=n);
            let mut pool: Vec<usize> = (0..n).collect();
            for i in 0..size {
                let swap_with = rng.gen_range(i..n);
                pool.swap(i, swap_with);
            }
            let mut subset = pool[..size].to_vec();
            subset.sort_unstable();
            let gram = harmonic::character_gram(&g, &subset);
            let hat = s(g.dft(&g.indicator(&subset)))?;
            let inv_d = 1.0 / size as f64;
            for a in 0..n {
                for b in 0..n {
                    let want = hat[g.sub(b, a)].conj() * inv_d;
                    let got = gram[(a, b)];
                    ensure!(
                        (got - want).norm() <= TOL_GRAM,
                        "Gram entry ({a},{b}) on {moduli:?} is {got}, want {want}"
                    );
                }
            }
        }
    }
    Ok(())
}

/// Certification regressions stay pinned and a thousand-triple batch against
/// one shared catalog stays inside ten seconds.
fn criterion_12() -> Result<(), String> {
    let catalog = Catalog::embedded();

    let report = s(catalog.certify(t(6, 13, 2), Field::Complex))?;
    ensure!(
        report.verdict == Verdict::CoveredByCatalog,
        "(6,13,2) certified {} instead of covered",
        report.verdict
    );
    let halving = report
        .rules
        .iter()
        .find(|r| r.rule == CatalogRule::FieldHalving)
        .ok_or("no halving rule in the (6,13,2) report")?;
    ensure!(
        halving.outcome == Outcome3::Yes,
        "halving rule on (6,13,2) says {}",
        halving.outcome
    );

    let report = s(catalog.certify(t(6, 4, 3), Field::Real))?;
    ensure!(
        report.verdict == Verdict::CoveredByCatalog,
        "(6,4,3) certified {} instead of covered",
        report.verdict
    );
    let spanning = report
        .rules
        .iter()
        .find(|r| r.rule == CatalogRule::ZaunerDesign)
        .ok_or("no design rule in the (6,4,3) report")?;
    ensure!(
        spanning.outcome == Outcome3::Yes,
        "design rule on (6,4,3) says {}",
        spanning.outcome
    );

    let report = s(catalog.certify(t(9, 19, 3), Field::Complex))?;
    ensure!(
        report.verdict == Verdict::Novel,
        "(9,19,3) certified {} instead of novel",
        report.verdict
    );

    let mut batch = Vec::new();
    'fill: for d in 1..=25i128 {
        for n in [4i128, 5, 7, 9, 13, 19] {
            for r in 1..=7i128 {
                batch.push(t(d, n, r));
                if batch.len() == 1000 {
                    break 'fill;
                }
            }
        }
    }
    ensure!(
        batch.len() == 1000,
        "batch grid produced {} triples",
        batch.len()
    );
    let start = Instant::now();
    for &q in &batch {
        s(catalog.certify(q, Field::Complex))?;
    }
    let elapsed = start.elapsed();
    ensure!(
        elapsed < Duration::from_secs(10),
        "batch of 1000 took {elapsed:?}, budget 10 s"
    );
    Ok(())
}
