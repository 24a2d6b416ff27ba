use preserver::fixtures::{
    example_band_nilpotent, example_ors, example_symmetric_killer, random_dzp_map, random_jordan_map, random_zpp_map,
    GenSpec, Phi0Mode,
};
use preserver::jordan::{check_zpp_jordan_promotion, decompose_dzp};
use preserver::linalg::{Field, PrimeField, Rationals};
use preserver::nilspace::{rank_one_squares_vanish, PatternSpec};
use preserver::rng::{random_mat, seeded};
use preserver::verify::{
    check_idempotent_preserver, check_jordan, check_ring_hom, check_trivial_mult, check_zpp, fuzz_preserver,
};
use preserver::{LinMap, Property};

#[test]
fn ring_implies_jordan_implies_idempotent() {
    let f = PrimeField::new(5).unwrap();
    let mut seen = [0usize; 3];
    for seed in 0..30u64 {
        let phi = match seed % 3 {
            0 => random_jordan_map(&f, 2, 5, 1 + (seed % 2) as usize, 0, seed).unwrap(),
            1 => random_jordan_map(&f, 2, 6, 1, 1, seed).unwrap(),
            _ => {
                let mut rng = seeded(seed);
                LinMap::from_fn(f, 2, 3, |_, _| random_mat(&f, 3, 3, &mut rng))
            }
        };
        let ring = check_ring_hom(&phi).holds;
        let jordan = check_jordan(&phi).unwrap().holds;
        let idem = check_idempotent_preserver(&phi).unwrap().holds;
        assert!(!ring || jordan, "seed {seed}");
        assert_eq!(jordan, idem, "seed {seed}");
        seen[usize::from(ring) + usize::from(jordan)] += 1;
    }
    assert!(seen.iter().all(|&c| c > 0), "{seen:?}");
}

#[test]
fn zpp_and_jordan_give_ring_hom() {
    let f = PrimeField::new(7).unwrap();
    for seed in 0..12u64 {
        let (k1, k2) = ((seed % 3) as usize, ((seed / 3) % 2) as usize);
        let theta = random_jordan_map(&f, 2, 2 * (k1 + k2) + 1, k1, k2, seed).unwrap();
        let report = check_zpp_jordan_promotion(&theta).unwrap();
        assert!(report.holds);
        assert_eq!(report.zpp.holds, report.ring.holds);
        assert_eq!(report.ring.holds, k2 == 0 || k1 + k2 == 0);
    }
}

#[test]
fn witnesses_recheck() {
    let f = PrimeField::new(3).unwrap();
    for seed in 0..40u64 {
        let mut rng = seeded(seed);
        let phi = LinMap::from_fn(f, 2, 2, |_, _| random_mat(&f, 2, 2, &mut rng));
        for verdict in [check_zpp(&phi), check_ring_hom(&phi), check_trivial_mult(&phi)] {
            if let Some(w) = verdict.witness {
                assert!(w.recheck(&phi));
            }
        }
    }
}

#[test]
fn certified_dzp_maps_survive_fuzzing() {
    let q = Rationals;
    for seed in 0..4u64 {
        let (phi, _) = random_dzp_map(&q, 2, 5, 1, 1, seed).unwrap();
        decompose_dzp(&phi).unwrap();
        assert!(fuzz_preserver(&phi, Property::Dzp, 1000, seed).unwrap().holds);
    }
    let transpose_sum = random_jordan_map(&PrimeField::new(11).unwrap(), 3, 6, 1, 1, 0).unwrap();
    assert!(fuzz_preserver(&transpose_sum, Property::Dzp, 1000, 0).unwrap().holds);
}

#[test]
fn rank_one_square_criterion_on_fixtures() {
    let q = Rationals;
    let f = PrimeField::new(7).unwrap();
    let trivial = [
        example_symmetric_killer(&q),
        example_band_nilpotent(&q, 2, 2).unwrap(),
        example_band_nilpotent(&q, 3, 1).unwrap(),
    ];
    for phi in &trivial {
        assert!(check_zpp(phi).holds && check_trivial_mult(phi).holds);
        assert!(rank_one_squares_vanish(phi, 64, 1));
    }
    let nontrivial = [example_band_nilpotent(&q, 2, 3).unwrap(), example_ors(&q, 3, 5).unwrap(), LinMap::identity(q, 2)];
    for phi in &nontrivial {
        assert!(check_zpp(phi).holds && !check_trivial_mult(phi).holds);
        assert!(!rank_one_squares_vanish(phi, 64, 1));
    }
    for seed in 0..6u64 {
        let spec = GenSpec {
            n: 2,
            r: 6,
            k: (seed % 2) as usize,
            field: f.desc(),
            seed,
            phi0_mode: Phi0Mode::TrivialMult(PatternSpec { p: 1, q: 2, u: 1, v: 1 }),
        };
        let (phi, _) = random_zpp_map(&f, &spec).unwrap();
        assert_eq!(check_trivial_mult(&phi).holds, rank_one_squares_vanish(&phi, 64, seed), "seed {seed}");
    }
}

#[test]
fn generators_are_preservers() {
    for seed in 0..10u64 {
        let f = PrimeField::new(13).unwrap();
        let spec = GenSpec { n: 3, r: 9, k: 1, field: f.desc(), seed, phi0_mode: Phi0Mode::Band { k_band: 2 } };
        let (phi, truth) = random_zpp_map(&f, &spec).unwrap();
        assert!(check_zpp(&phi).holds);
        assert!(truth.verified && truth.nu == 2);
        let theta = random_jordan_map(&f, 2, 7, 1, 2, seed).unwrap();
        assert!(check_jordan(&theta).unwrap().holds);
    }
    let _ = Rationals.one();
}
