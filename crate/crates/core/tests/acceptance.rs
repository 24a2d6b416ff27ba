//! Acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the report.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use serde_json::{json, Value};

use preserver::fixtures::{
    example_band_nilpotent, example_ors, example_symmetric_killer, random_dzp_map, random_jordan_map, random_zpp_map,
    GenSpec, Phi0Mode,
};
use preserver::jordan::{decompose_dzp, jordan_canonical_form, split_jordan};
use preserver::linalg::{Field, Mat, PrimeField, Rationals};
use preserver::nilspace::{
    canonicalize_trivial_mult, check_pairwise_zero, generate_full_support_subspace, generate_pattern_subspace,
    max_rank_element, min_full_support_dim, PatternSpec,
};
use preserver::rng::{derive_seed, random_invertible, random_mat, seeded};
use preserver::structure::{canonicalize_unital_hom, decompose_zpp};
use preserver::verify::{check_power_products, check_ring_hom, check_trivial_mult, check_zpp, fuzz_preserver};
use preserver::{LinMap, Property};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < limit, || format!("took {spent:.1?}, limit {limit:?}"))
}

// 1. check_zpp against the brute-force zero-pair oracle

fn all_matrices(f: &PrimeField, n: usize) -> Vec<Mat<PrimeField>> {
    let p = f.modulus();
    let cells = (n * n) as u32;
    (0..p.pow(cells))
        .map(|mut idx| {
            Mat::from_fn(*f, n, n, |_, _| {
                let e = f.nth_element(idx % p);
                idx /= p;
                e
            })
        })
        .collect()
}

fn oracle_zpp(phi: &LinMap<PrimeField>, mats: &[Mat<PrimeField>], pairs: &[(usize, usize)]) -> bool {
    let images: Vec<_> = mats.iter().map(|a| phi.apply(a).unwrap()).collect();
    pairs.iter().all(|&(a, b)| (&images[a] * &images[b]).is_zero())
}

fn oracle_candidate(f: &PrimeField, r: usize, family: u64, seed: u64) -> LinMap<PrimeField> {
    let n = 2;
    let mut rng = seeded(seed);
    match family {
        0 => LinMap::from_fn(*f, n, r, |_, _| random_mat(f, r, r, &mut rng)),
        1 => LinMap::from_fn(*f, n, r, |_, _| {
            Mat::from_fn(*f, r, r, |_, _| if rng.random_bool(0.1) { f.sample(&mut rng) } else { f.zero() })
        }),
        _ => {
            let k = rng.random_range(0..=r / 2);
            let extra = r - 2 * k;
            let mode = match rng.random_range(0..3) {
                1 if extra >= 2 => Phi0Mode::TrivialMult(PatternSpec { p: 1, q: extra - 2, u: 0, v: 0 }),
                2 if extra >= 4 => Phi0Mode::Band { k_band: 2 },
                _ => Phi0Mode::None,
            };
            let spec = GenSpec { n, r, k, field: f.desc(), seed, phi0_mode: mode };
            let phi = random_zpp_map(f, &spec).unwrap().0;
            if family == 2 {
                return phi;
            }
            // one perturbed image entry
            let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
            let mut images = phi.images().to_vec();
            let m = &mut images[i * n + j];
            let (a, b) = (rng.random_range(0..r), rng.random_range(0..r));
            let bumped = f.add(m.get(a, b), &f.one());
            m.set(a, b, bumped);
            LinMap::new(*f, n, r, images).unwrap()
        }
    }
}

fn criterion_oracle() -> Outcome {
    let start = Instant::now();
    let (mut total, mut holding) = (0, 0);
    for p in [2u64, 3] {
        let f = PrimeField::new(p).unwrap();
        let mats = all_matrices(&f, 2);
        let pairs: Vec<(usize, usize)> = (0..mats.len())
            .flat_map(|a| (0..mats.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| (&mats[a] * &mats[b]).is_zero())
            .collect();
        for r in 2..=4 {
            for t in 0..100u64 {
                let phi = oracle_candidate(&f, r, t % 4, derive_seed(p * 100 + r as u64, t));
                let verdict = check_zpp(&phi);
                let oracle = oracle_zpp(&phi, &mats, &pairs);
                ensure(verdict.holds == oracle, || format!("GF({p}) r={r} map {t}: check {} oracle {oracle}", verdict.holds))?;
                if let Some(w) = &verdict.witness {
                    ensure(w.recheck(&phi), || format!("GF({p}) r={r} map {t}: witness does not recheck"))?;
                }
                total += 1;
                holding += usize::from(oracle);
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{total} maps agree with the oracle ({holding} preservers)"))
}

// 2. decompose_zpp round trip on generated preservers

fn random_mode<R: Rng>(n: usize, extra: usize, rng: &mut R) -> Phi0Mode {
    match rng.random_range(0..3) {
        1 if extra >= 2 => {
            let p = rng.random_range(1..=extra / 2);
            let q = rng.random_range(0..=extra - 2 * p);
            let u = rng.random_range(0..=p);
            let v = rng.random_range(0..=q);
            Phi0Mode::TrivialMult(PatternSpec { p, q, u, v })
        }
        2 if extra >= 2 * n => Phi0Mode::Band { k_band: rng.random_range(2..=extra / n) },
        _ => Phi0Mode::None,
    }
}

fn round_trip_field<F: Field>(field: F, count: u64) -> Result<usize, String> {
    let mut modes = [0usize; 3];
    for t in 0..count {
        let seed = derive_seed(field.desc().characteristic(), t);
        let mut rng = seeded(seed);
        let n = 2 + (t % 3) as usize;
        let k = rng.random_range(0..=2);
        let extra = rng.random_range(0..=6);
        let phi0_mode = random_mode(n, extra, &mut rng);
        let spec = GenSpec { n, r: n * k + extra, k, field: field.desc(), seed, phi0_mode };
        let (phi, _) = random_zpp_map(&field, &spec).map_err(|e| format!("{spec:?}: generator: {e}"))?;
        let cert = decompose_zpp(&phi).map_err(|e| format!("{spec:?}: {e}"))?;
        let rebuilt = cert.reconstruct().map_err(|e| e.to_string())?;
        ensure(rebuilt == phi, || format!("{spec:?}: reconstruction differs"))?;
        ensure(cert.k == k, || format!("{spec:?}: k = {}", cert.k))?;
        ensure(cert.nu == spec.expected_nu(), || format!("{spec:?}: nu = {}", cert.nu))?;
        modes[match phi0_mode {
            Phi0Mode::None => 0,
            Phi0Mode::TrivialMult(_) => 1,
            Phi0Mode::Band { .. } => 2,
        }] += 1;
    }
    ensure(modes.iter().all(|&m| m > 0), || format!("mode coverage {modes:?}"))?;
    Ok(count as usize)
}

fn criterion_round_trip() -> Outcome {
    let start = Instant::now();
    let total = round_trip_field(PrimeField::new(7).unwrap(), 100)?
        + round_trip_field(PrimeField::new(101).unwrap(), 100)?
        + round_trip_field(Rationals, 100)?;
    within(start, Duration::from_secs(120))?;
    Ok(format!("{total} certificates over GF(7), GF(101), Q reconstruct exactly with the generated k and nu"))
}

// 3. the example maps

fn criterion_fixtures() -> Outcome {
    let q = Rationals;
    let band = example_band_nilpotent(&q, 2, 3).unwrap();
    let id = band.at_identity();
    ensure(check_zpp(&band).holds, || "band: not ZPP".into())?;
    ensure(!id.pow(2).is_zero() && id.pow(3).is_zero(), || "band: wrong nil index".into())?;
    let products = check_power_products(&band, 3, 200, 0).map_err(|e| format!("band: {e}"))?;
    ensure(products.holds, || "band: nonzero 4-fold product".into())?;

    let ors = example_ors(&q, 2, 4).unwrap();
    ensure(check_zpp(&ors).holds, || "ors: not ZPP".into())?;
    let id = ors.at_identity();
    ensure(!id.is_zero() && id.pow(2).is_zero(), || "ors: Φ(I)² ≠ 0".into())?;
    let e = &Mat::unit(q, 2, 0, 0) + &Mat::unit(q, 2, 0, 1);
    let img = ors.apply(&e).unwrap();
    ensure(!(&img * &img).is_zero(), || "ors: Φ(E)² = 0".into())?;

    let killer = example_symmetric_killer(&q);
    ensure(check_zpp(&killer).holds && check_trivial_mult(&killer).holds, || "symmetric killer".into())?;
    Ok("band (2,3), ors (2,4) and symmetric killer behave as stated".into())
}

// 4. unital homomorphism canonical form

fn hom_case<F: Field>(field: F, n: usize, k: usize, seed: u64) -> Result<(), String> {
    let model = LinMap::from_fn(field.clone(), n, n * k, |i, j| {
        Mat::identity(field.clone(), k).kron(&Mat::unit(field.clone(), n, i, j))
    });
    let t = random_invertible(&field, n * k, &mut seeded(seed));
    let psi = model.conjugate(&t).unwrap();
    let (s1, found) = canonicalize_unital_hom(&psi).map_err(|e| format!("n={n} k={k}: {e}"))?;
    ensure(found == k, || format!("n={n} k={k}: recovered {found}"))?;
    let inv = s1.inverse().map_err(|e| e.to_string())?;
    for i in 0..n {
        for j in 0..n {
            let rebuilt = &(&s1 * model.image(i, j)) * &inv;
            ensure(&rebuilt == psi.image(i, j), || format!("n={n} k={k}: identity fails at E_{}{}", i + 1, j + 1))?;
        }
    }
    Ok(())
}

fn criterion_hom() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for t in 0..120u64 {
        let n = 2 + (t % 2) as usize;
        let k = 1 + ((t / 2) % 3) as usize;
        if t % 3 == 0 {
            hom_case(Rationals, n, k, t)?;
        } else {
            hom_case(PrimeField::new(if t % 3 == 1 { 5 } else { 101 }).unwrap(), n, k, t)?;
        }
        count += 1;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{count} conjugated homomorphisms canonicalised with the right k"))
}

// 5. Jordan homomorphisms

fn jordan_case<F: Field>(field: F, t: u64) -> Result<(), String> {
    let mut rng = seeded(derive_seed(99, t));
    let n = rng.random_range(2..=3);
    let (k1, k2) = (rng.random_range(0..=2), rng.random_range(0..=2));
    let r = n * (k1 + k2) + rng.random_range(0..=2);
    let tag = format!("n={n} k1={k1} k2={k2} r={r}");
    let theta = random_jordan_map(&field, n, r, k1, k2, t).map_err(|e| e.to_string())?;
    let split = split_jordan(&theta).map_err(|e| format!("{tag}: split: {e}"))?;
    ensure(split.h.try_add(&split.g).unwrap() == theta, || format!("{tag}: h + g differs"))?;
    ensure(check_ring_hom(&split.h).holds, || format!("{tag}: h not multiplicative"))?;
    ensure(check_ring_hom(&split.g.precompose_transpose()).holds, || format!("{tag}: g not anti-multiplicative"))?;
    ensure(split.p.rank() == n * k1 && split.q.rank() == n * k2, || format!("{tag}: wrong P, Q ranks"))?;
    let form = jordan_canonical_form(&theta).map_err(|e| format!("{tag}: canonical form: {e}"))?;
    ensure((form.k1, form.k2) == (k1, k2), || format!("{tag}: recovered ({}, {})", form.k1, form.k2))?;
    ensure(form.reconstruct(n).unwrap() == theta, || format!("{tag}: canonical form does not reconstruct"))?;

    let (phi, _) = random_dzp_map(&field, n, r, k1, k2, t).map_err(|e| e.to_string())?;
    let cert = decompose_dzp(&phi).map_err(|e| format!("{tag}: dzp: {e}"))?;
    ensure(cert.reconstruct().unwrap() == phi, || format!("{tag}: dzp certificate does not reconstruct"))?;
    ensure((cert.k1, cert.k2) == (k1, k2), || format!("{tag}: dzp recovered ({}, {})", cert.k1, cert.k2))?;
    Ok(())
}

fn criterion_jordan() -> Outcome {
    let start = Instant::now();
    for t in 0..120u64 {
        match t % 3 {
            0 => jordan_case(Rationals, t)?,
            1 => jordan_case(PrimeField::new(7).unwrap(), t)?,
            _ => jordan_case(PrimeField::new(101).unwrap(), t)?,
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok("120 Jordan maps split, canonicalised and R-scaled variants certified".into())
}

// 6. trivial-multiplication canonicalizer

fn criterion_nilspace() -> Outcome {
    let start = Instant::now();
    let f = PrimeField::new(11).unwrap();
    let mut count = 0;
    for p in 1..=4usize {
        for q in 0..=8 - 2 * p {
            for u in 0..=p {
                for v in 0..=q {
                    if (u == 0) != (v == 0) {
                        continue;
                    }
                    let spec = PatternSpec { p, q, u, v };
                    for seed in [2 * count as u64, 2 * count as u64 + 1] {
                        let basis = generate_full_support_subspace(&f, spec, min_full_support_dim(spec), seed)
                            .map_err(|e| format!("{spec:?}: generator: {e}"))?;
                        let t = random_invertible(&f, spec.l(), &mut seeded(seed + 1000));
                        let t_inv = t.inverse().unwrap();
                        let conj: Vec<_> = basis.iter().map(|m| &(&t * m) * &t_inv).collect();
                        let form = canonicalize_trivial_mult(&conj, &f, spec.l(), seed).map_err(|e| format!("{spec:?}: {e}"))?;
                        ensure(form.spec == spec, || format!("{spec:?}: recovered {:?}", form.spec))?;
                        ensure(form.check_pattern(&conj), || format!("{spec:?}: pattern violated"))?;
                        count += 1;
                    }
                }
            }
        }
    }
    ensure(count >= 100, || format!("only {count} instances"))?;

    let f3 = PrimeField::new(3).unwrap();
    let mut oracle_cases = 0;
    for p in 1..=2usize {
        for q in 0..=4 - 2 * p {
            let spec = PatternSpec { p, q, u: p.min(q), v: p.min(q) };
            for dim in 1..=3 {
                let basis = generate_pattern_subspace(&f3, spec, dim, dim as u64).unwrap();
                let best = brute_max_rank(&f3, spec.l(), &basis);
                let found = max_rank_element(&f3, spec.l(), &basis, 0).rank();
                ensure(found == best, || format!("{spec:?} dim {dim}: search {found}, oracle {best}"))?;
                if spec.l() <= 3 {
                    let form = canonicalize_trivial_mult(&basis, &f3, spec.l(), 0).map_err(|e| e.to_string())?;
                    ensure(form.spec.p == best, || format!("{spec:?}: p = {}, oracle {best}", form.spec.p))?;
                }
                oracle_cases += 1;
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{count} subspaces recovered exactly; {oracle_cases} GF(3) cases match the max-rank oracle"))
}

fn brute_max_rank(f: &PrimeField, l: usize, basis: &[Mat<PrimeField>]) -> usize {
    let p = f.modulus();
    (0..p.pow(basis.len() as u32))
        .map(|mut idx| {
            let mut m = Mat::zeros(*f, l, l);
            for z in basis {
                m = &m + &z.scale(&f.nth_element(idx % p));
                idx /= p;
            }
            m.rank()
        })
        .max()
        .unwrap_or(0)
}

// 7. negative controls

fn zpp_bin(args: &[&str], stdin: &Value) -> (i32, String) {
    let dir = std::env::temp_dir().join(format!("zpp-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(format!("in-{}.json", args.join("-")));
    std::fs::write(&path, stdin.to_string()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_zpp")).args(args).arg("--in").arg(&path).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn criterion_negative() -> Outcome {
    let q = Rationals;
    let transpose = LinMap::transpose_map(q, 2);
    let verdict = check_zpp(&transpose);
    ensure(!verdict.holds, || "transpose passes check_zpp".into())?;
    ensure(verdict.witness.as_ref().is_some_and(|w| w.recheck(&transpose)), || "transpose witness".into())?;

    let basis = vec![Mat::unit(q, 2, 0, 1), Mat::unit(q, 2, 1, 0)];
    let pz = check_pairwise_zero(&basis);
    ensure(!pz.holds && pz.witness.as_ref().is_some_and(|w| w.recheck_basis(&basis)), || "{E12, E21}".into())?;

    let f2 = PrimeField::new(2).unwrap();
    let doc = LinMap::transpose_map(f2, 2).to_json();
    for args in [&["check", "--property", "jordan"][..], &["check", "--property", "idem"], &["split-jordan"], &["decompose", "--property", "dzp"]] {
        let (code, out) = zpp_bin(args, &doc);
        ensure(code == 2, || format!("{args:?} over GF(2) exited {code}"))?;
        ensure(out.contains("characteristic_two"), || format!("{args:?}: {out}"))?;
    }
    Ok("transpose and {E12, E21} rejected with verified witnesses; char-2 Jordan requests exit 2".into())
}

// 8. determinism

fn artifacts() -> Vec<String> {
    let mut docs = Vec::new();
    for t in 0..6u64 {
        let f = PrimeField::new(101).unwrap();
        let spec = GenSpec {
            n: 2 + (t % 2) as usize,
            r: 9,
            k: 1,
            field: f.desc(),
            seed: t,
            phi0_mode: if t % 3 == 0 { Phi0Mode::Band { k_band: 2 } } else { Phi0Mode::None },
        };
        let (phi, truth) = random_zpp_map(&f, &spec).unwrap();
        docs.push(phi.to_json().to_string());
        docs.push(truth.to_json().to_string());
        docs.push(decompose_zpp(&phi).unwrap().to_json().to_string());
        docs.push(fuzz_preserver(&phi, Property::Zpp, 200, t).unwrap().to_json().to_string());
    }
    let f = PrimeField::new(11).unwrap();
    let spec = PatternSpec { p: 2, q: 2, u: 1, v: 1 };
    let basis = generate_full_support_subspace(&f, spec, min_full_support_dim(spec), 5).unwrap();
    docs.push(canonicalize_trivial_mult(&basis, &f, spec.l(), 5).unwrap().to_json().to_string());
    let (phi, _) = random_dzp_map(&f, 2, 6, 1, 1, 8).unwrap();
    docs.push(decompose_dzp(&phi).unwrap().to_json().to_string());
    docs.push(fuzz_preserver(&LinMap::transpose_map(f, 3), Property::Zpp, 500, 1).unwrap().to_json().to_string());

    let gen = json!({"n": 2, "r": 8, "k": 2, "field": "GF(7)", "seed": 3, "phi0_mode": {"mode": "band", "k_band": 2}});
    for args in [&["gen"][..], &["gen", "--seed", "9"]] {
        docs.push(zpp_bin(args, &gen).1);
    }
    let map = LinMap::transpose_map(PrimeField::new(5).unwrap(), 2).to_json();
    for args in [&["fuzz", "--trials", "300", "--seed", "4"][..], &["check", "--property", "dzp", "--seed", "4"]] {
        docs.push(zpp_bin(args, &map).1);
    }
    docs
}

fn criterion_determinism() -> Outcome {
    let first = artifacts();
    let second = artifacts();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(artifacts);
    ensure(first == second, || "two runs differ".into())?;
    ensure(first == single, || "single-threaded run differs".into())?;
    let bytes: usize = first.iter().map(String::len).sum();
    Ok(format!("{} artifacts ({bytes} bytes) identical across runs and thread counts", first.len()))
}

#[test]
#[allow(clippy::type_complexity)]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("oracle equivalence", criterion_oracle),
        ("round-trip decomposition", criterion_round_trip),
        ("fixture regression", criterion_fixtures),
        ("homomorphism canonical form", criterion_hom),
        ("jordan suite", criterion_jordan),
        ("trivial-mult canonicalizer", criterion_nilspace),
        ("negative controls", criterion_negative),
        ("determinism", criterion_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let line = match &outcome {
            Ok(detail) => format!("criterion {} ({name}): PASS [{secs:.1}s] {detail}\n", i + 1),
            Err(detail) => {
                failed.push(i + 1);
                format!("criterion {} ({name}): FAIL [{secs:.1}s] {detail}\n", i + 1)
            }
        };
        // straight to the stream so the lines survive libtest's output capture
        let _ = std::io::stderr().write_all(line.as_bytes());
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
