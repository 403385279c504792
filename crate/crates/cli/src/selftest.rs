//! Seeded property suites run by `polarize selftest`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use polarize_core::cones::{is_extremal_face, minimal_extremal_face, pair_test_extremality};
use polarize_core::dynamics::{abelian_invariant_check, q_from_degree, restricted_degree, AbelianVerdict};
use polarize_core::exactalg::{char_poly, int, min_poly, roots_with_multiplicity, spectral_projector};
use polarize_core::nslattice::{example_ex1_report, intersect};
use polarize_core::singularities::{age, ex_xu_verdict, SingularityVerdict};
use polarize_core::{build_cone, CyclicActionElement, QMatrix, Rat, SymClass};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::Report;

pub struct SuiteResult {
    pub name: &'static str,
    pub cases: usize,
    pub outcome: Result<(), String>,
}

type Suite = fn(&mut ChaCha8Rng) -> Result<usize, String>;

const SUITES: &[(&str, Suite)] = &[
    ("golden-examples", golden),
    ("spectral-projector", projectors),
    ("minimal-face", faces),
    ("degree-calculus", degrees),
    ("projection-formula", projection_formula),
    ("age-duality", ages),
    ("report-round-trip", round_trip),
];

/// Runs every suite with its own generator derived from `seed`, in a fixed
/// order.
pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    SUITES
        .iter()
        .enumerate()
        .map(|(i, (name, f))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((i as u64 + 1) << 32));
            match f(&mut rng) {
                Ok(cases) => SuiteResult { name, cases, outcome: Ok(()) },
                Err(e) => SuiteResult { name, cases: 0, outcome: Err(e) },
            }
        })
        .collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn small_matrix(rng: &mut ChaCha8Rng, n: usize) -> QMatrix {
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    QMatrix::from_ints(&rows)
}

fn golden(_: &mut ChaCha8Rng) -> Result<usize, String> {
    example_ex1_report().map_err(|e| e.to_string())?;
    let x = ex_xu_verdict(4, 3, 2, &[1, 1, 1]).map_err(|e| e.to_string())?;
    ensure(x.ages.verdict == SingularityVerdict::Terminal, || "ex-xu-4-3 is not terminal".into())?;
    ensure(x.ages.min_age_nontrivial == Some(Rat::new(9.into(), 4.into())), || "min age is not 9/4".into())?;
    let y = ex_xu_verdict(6, 1, 2, &[1]).map_err(|e| e.to_string())?;
    ensure(y.ages.verdict == SingularityVerdict::Terminal && y.dim_x == 6, || "ex-xu-6-1 mismatch".into())?;
    Ok(3)
}

fn projectors(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut cases = 0;
    for _ in 0..40 {
        let n = rng.gen_range(1..=4);
        let m = small_matrix(rng, n);
        let cp = char_poly(&m).map_err(|e| e.to_string())?;
        let mp = min_poly(&m).map_err(|e| e.to_string())?;
        ensure(mp.divides(&cp) && mp.eval_matrix(&m).is_zero(), || format!("min poly check fails on {m}"))?;
        for (a, _) in roots_with_multiplicity(&cp).map_err(|e| e.to_string())? {
            let Some(q) = a.as_rational() else { continue };
            let Ok(p) = spectral_projector(&m, q) else { continue };
            ensure(&p * &p == p && &m * &p == p.scale(q) && &p * &m == p.scale(q), || {
                format!("projector identities fail on {m} at {q}")
            })?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn faces(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..30 {
        let d = rng.gen_range(2..=4);
        let gens: Vec<Vec<Rat>> = (0..rng.gen_range(d..=d + 3))
            .map(|_| {
                let mut g: Vec<Rat> = (0..d - 1).map(|_| int(rng.gen_range(-2..=2))).collect();
                g.push(int(rng.gen_range(1..=2)));
                g
            })
            .collect();
        let c = build_cone(&gens).map_err(|e| e.to_string())?;
        let k = rng.gen_range(0..gens.len());
        let sub = vec![gens[k].clone()];
        let f = minimal_extremal_face(&c, &sub).map_err(|e| e.to_string())?;
        ensure(f.contains(&gens[k]), || "face misses its generator".into())?;
        ensure(is_extremal_face(&c, &f).map_err(|e| e.to_string())?, || "face is not extremal".into())?;
        ensure(pair_test_extremality(&c, &f, 16, rng.gen()), || "pair test fails".into())?;
    }
    Ok(30)
}

fn degrees(_: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut cases = 0;
    for q in 1..=12u32 {
        for n in 1..=12u32 {
            let deg = restricted_degree(&BigInt::from(q), n);
            ensure(q_from_degree(&deg, n) == Ok(BigInt::from(q)), || format!("round trip fails at q={q}, n={n}"))?;
            cases += 1;
        }
    }
    for q in 2..=10u32 {
        for dx in 1..=10u32 {
            for dz in 0..dx {
                let v = abelian_invariant_check(&BigInt::from(q), dx, dz).map_err(|e| e.to_string())?;
                ensure(v == AbelianVerdict::Contradiction, || format!("no contradiction at {q}, {dx}, {dz}"))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn projection_formula(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..100 {
        let mut r = || rng.gen_range(-9i64..=9);
        let a = QMatrix::from_ints(&[[r(), r()], [r(), r()]]);
        let (h1, h2) = (SymClass::new(r(), r(), r()), SymClass::new(r(), r(), r()));
        let d = a.det().map_err(|e| e.to_string())?.to_integer();
        ensure(intersect(&h1.pullback(&a), &h2.pullback(&a)) == &d * &d * intersect(&h1, &h2), || {
            format!("projection formula fails for {a}")
        })?;
    }
    Ok(100)
}

fn ages(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for _ in 0..100 {
        let m = rng.gen_range(2..=12u64);
        let w: Vec<u64> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..m)).collect();
        let e = CyclicActionElement::new(m, rng.gen_range(1..m), w).map_err(|e| e.to_string())?;
        let nonzero = e.residues().iter().filter(|r| !r.is_zero()).count();
        ensure(age(&e) + age(&e.inverse()) == Rat::from_integer(nonzero.into()), || format!("{e:?}"))?;
    }
    ensure(!Rat::one().is_zero(), String::new)?;
    Ok(100)
}

fn round_trip(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    for (name, text) in crate::BUILTIN {
        let r = crate::analyze_text(text, name, rng.gen(), 8).map_err(|e| e.to_string())?;
        let back = Report::from_json(&r.to_json()).map_err(|e| e.to_string())?;
        ensure(back == r, || format!("{name} does not round-trip"))?;
    }
    Ok(crate::BUILTIN.len())
}
