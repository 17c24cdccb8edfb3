use num_rational::Ratio;
use proptest::prelude::*;

use rotlab_core::abelian::UnitComplex;
use rotlab_core::conjugation::{bmv_detector, build_semiconjugacy, find_periodic_orbit, BmvVerdict};
use rotlab_core::entropy::{estimate_entropy, EntropyParams};
use rotlab_core::maps::{iterate, LiftMap, TrigTerm, Wave};
use rotlab_core::rational::{factorial, frac};
use rotlab_core::rotation::{rotation_element_solenoid, rotation_number_circle, rotation_set_torus};
use rotlab_core::suspension::{char_eval_suspension, check_suite, SuspensionChar, SuspensionPoint};
use rotlab_core::translation::{
    birkhoff_average, character_ergodicity_test, equidistribution_report, monothetic_test, Observable, Partition,
    Verdict,
};
use rotlab_core::{
    Character, CircleLiftMap, CirclePoint, GroupPoint, MapModel, ProfiniteInt, SolenoidLeafMap, SolenoidPoint,
    TorusLiftMap, TorusPoint, Translation,
};

fn profinite(depth: u32, r: u64) -> ProfiniteInt {
    ProfiniteInt::new(depth, r % factorial(depth)).unwrap()
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n.min(5040)).filter(|d| n % d == 0).collect()
}

fn exact_eq(a: &UnitComplex, b: &UnitComplex) -> bool {
    match (a.exact, b.exact) {
        (Some(x), Some(y)) => x == y,
        _ => false,
    }
}

fn arnold() -> impl Strategy<Value = CircleLiftMap> {
    (0.0..1.0f64, 0.0..0.15f64).prop_map(|(c, a)| CircleLiftMap::arnold(c, a).unwrap())
}

fn level2_solenoid() -> impl Strategy<Value = SolenoidLeafMap> {
    (0.0..1.0f64, 0.0..0.1f64).prop_map(|(c, a)| SolenoidLeafMap::new(6, c, [(2, a)].into()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn profinite_group_axioms(depth in 1u32..=12, a: u64, b: u64, c: u64) {
        let (x, y, z) = (profinite(depth, a), profinite(depth, b), profinite(depth, c));
        let zero = ProfiniteInt::zero(depth).unwrap();
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.add(&zero), x);
        prop_assert!(x.add(&x.neg()).is_zero());
    }

    #[test]
    fn profinite_characters_are_homomorphisms(depth in 1u32..=10, a: u64, b: u64, num: i64, pick: usize) {
        let ds = divisors(factorial(depth));
        let den = ds[pick % ds.len()] as i64;
        let chi = Character::profinite(Ratio::new(num % 1000, den));
        let (x, y) = (profinite(depth, a), profinite(depth, b));
        let lhs = chi.eval(&GroupPoint::Profinite(x.add(&y))).unwrap();
        let rhs = chi.eval(&GroupPoint::Profinite(x)).unwrap().mul(&chi.eval(&GroupPoint::Profinite(y)).unwrap());
        prop_assert!(exact_eq(&lhs, &rhs), "{:?} {:?}", lhs, rhs);
    }

    #[test]
    fn circle_and_solenoid_characters_are_homomorphisms(
        k in -50i64..50,
        p1 in -200i64..200, q1 in 1i64..60,
        p2 in -200i64..200, q2 in 1i64..60,
        r1 in 0u64..720, r2 in 0u64..720,
        num in -30i64..30, pick: usize,
    ) {
        let (s, t) = (Ratio::new(p1, q1), Ratio::new(p2, q2));
        let chi = Character::Circle { k };
        let g = GroupPoint::Circle(CirclePoint::from_rational(s));
        let h = GroupPoint::Circle(CirclePoint::from_rational(t));
        let lhs = chi.eval(&g.add(&h).unwrap()).unwrap();
        prop_assert!(exact_eq(&lhs, &chi.eval(&g).unwrap().mul(&chi.eval(&h).unwrap())));

        let ds = divisors(720);
        let den = ds[pick % ds.len()] as i64;
        let chi = Character::solenoid(Ratio::new(num, den));
        let g = GroupPoint::Solenoid(SolenoidPoint::from_lift_exact(s, profinite(6, r1)));
        let h = GroupPoint::Solenoid(SolenoidPoint::from_lift_exact(t, profinite(6, r2)));
        let lhs = chi.eval(&g.add(&h).unwrap()).unwrap();
        prop_assert!(exact_eq(&lhs, &chi.eval(&g).unwrap().mul(&chi.eval(&h).unwrap())));
    }

    #[test]
    fn characters_separate_profinite_points(depth in 1u32..=8, a: u64, b: u64) {
        let (x, y) = (profinite(depth, a), profinite(depth, b));
        prop_assume!(x != y);
        let m = factorial(depth) as i64;
        let found = divisors(m as u64).into_iter().any(|den| {
            (1..den as i64).any(|num| {
                let chi = Character::profinite(Ratio::new(num, den as i64));
                let ex = chi.eval(&GroupPoint::Profinite(x)).unwrap();
                let ey = chi.eval(&GroupPoint::Profinite(y)).unwrap();
                !exact_eq(&ex, &ey)
            })
        });
        prop_assert!(found);
    }

    #[test]
    fn level_projection_is_coherent(depth in 1u32..=12, a: u64, b: u64, i: usize, j: usize) {
        let ds = divisors(factorial(depth));
        let n = ds[i % ds.len()];
        let sub = divisors(n);
        let m = sub[j % sub.len()];
        let (x, y) = (profinite(depth, a), profinite(depth, b));
        prop_assert_eq!(x.project(m).unwrap(), x.project(n).unwrap() % m);
        prop_assert_eq!(x.add(&y).project(n).unwrap(), (x.project(n).unwrap() + y.project(n).unwrap()) % n);
    }

    #[test]
    fn solenoid_characters_respect_the_deck_relation(
        p in -500i64..500, q in 1i64..50, shift in -20i64..20, r in 0u64..40320, num in -20i64..20, pick: usize,
    ) {
        let t = Ratio::new(p, q);
        let x = profinite(8, r);
        let a = SolenoidPoint::from_lift_exact(t, x);
        let b = SolenoidPoint::from_lift_exact(t + Ratio::from_integer(shift), x.add_integer(-shift));
        prop_assert_eq!(a, b);
        let ds = divisors(40320);
        let chi = Character::solenoid(Ratio::new(num, ds[pick % ds.len()] as i64));
        let ea = chi.eval(&GroupPoint::Solenoid(a)).unwrap();
        let eb = chi.eval(&GroupPoint::Solenoid(b)).unwrap();
        prop_assert!(exact_eq(&ea, &eb));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn displacement_ignores_the_representative(f in arnold(), x in -3.0..3.0f64, k in -5i64..5) {
        prop_assert!((f.disp(x) - f.disp(x + k as f64)).abs() < 1e-12);
        let term = TrigTerm { coord: 0, amp: 0.05, k: [1, 1], wave: Wave::Sin, phase: 0.0 };
        let g = TorusLiftMap::trig([0.3, 0.1], vec![term]).unwrap();
        let d0 = g.disp([x, 0.2]);
        let d1 = g.disp([x + k as f64, 0.2 - k as f64]);
        prop_assert!((d0[0] - d1[0]).abs() < 1e-12 && (d0[1] - d1[1]).abs() < 1e-12);
    }

    #[test]
    fn orbits_follow_the_lift(f in arnold(), x0 in 0.0..1.0f64, n in 1usize..400) {
        let trace = iterate(&f, &CirclePoint::new(x0), n);
        let mut lifted = x0;
        let mut sum = 0.0;
        for (k, p) in trace.points.iter().enumerate() {
            let d = CirclePoint::new(lifted).dist(p);
            prop_assert!(d < 1e-9, "step {}: {}", k, d);
            prop_assert!((trace.cumulative[k] - sum).abs() < 1e-9);
            if k < n {
                sum += f.displacement(p);
                lifted = f.lift(lifted);
            }
        }
        prop_assert!((trace.total_displacement() - (lifted - x0)).abs() < 1e-9);
    }

    #[test]
    fn solenoid_orbits_project_to_induced_orbits(f in level2_solenoid(), t in 0.0..1.0f64, r in 0u64..720) {
        let induced = f.induced(2).unwrap();
        let start = SolenoidPoint::from_lift(t, profinite(6, r));
        let mut u = start.project(2).unwrap();
        let trace = iterate(&f, &start, 200);
        for p in &trace.points {
            let v = p.project(2).unwrap();
            let d = (u - v).rem_euclid(2.0);
            prop_assert!(d.min(2.0 - d) < 1e-9);
            u = induced.step(&u).0;
        }
    }

    #[test]
    fn cocycle_identities(f in arnold(), seed: u64) {
        let chars = [SuspensionChar::new(Character::Circle { k: 1 }, 0), SuspensionChar::new(Character::Circle { k: -2 }, 3)];
        let check = check_suite(&f, &chars, 20, 3.0, seed).unwrap();
        prop_assert!(check.max_residual() < 1e-9, "{:?}", check);
    }

    #[test]
    fn suspension_characters_multiply(k1 in -5i64..5, k2 in -5i64..5, n1 in -5i64..5, n2 in -5i64..5, x in 0.0..1.0f64, s in 0.0..1.0f64) {
        let p = SuspensionPoint::new(CirclePoint::new(x), s).unwrap();
        let a = SuspensionChar::new(Character::Circle { k: k1 }, n1);
        let b = SuspensionChar::new(Character::Circle { k: k2 }, n2);
        let ab = SuspensionChar::new(a.base.add(&b.base).unwrap(), n1 + n2);
        let lhs = char_eval_suspension(&ab, &p).unwrap();
        let rhs = char_eval_suspension(&a, &p).unwrap().mul(&char_eval_suspension(&b, &p).unwrap());
        prop_assert!(lhs.angle_dist(&rhs) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rotation_is_conjugacy_invariant(c in 0.0..1.0f64, a in 0.0..0.15f64, beta in 0.0..1.0f64, x0 in 0.0..1.0f64) {
        let f = CircleLiftMap::arnold(c, a).unwrap();
        let g = CircleLiftMap::parsed(&format!("x + {c} + {a}*sin(2*pi*(x + {beta}))")).unwrap();
        let n = 20_000;
        let rf = rotation_number_circle(&f, &CirclePoint::new(x0 + beta), n).unwrap();
        let rg = rotation_number_circle(&g, &CirclePoint::new(x0), n).unwrap();
        let (ef, eg) = (rf.estimate.scalar().unwrap(), rg.estimate.scalar().unwrap());
        prop_assert!((ef - eg).abs() < 1e-9, "{} {}", ef, eg);
    }

    #[test]
    fn rigid_rotation_shifts_additively(alpha in 0.0..1.0f64, p in 0i64..20, q in 1i64..20) {
        let beta = p as f64 / q as f64;
        let n = 10_000;
        let r0 = rotation_number_circle(&CircleLiftMap::rigid(alpha), &CirclePoint::zero(), n).unwrap();
        let r1 = rotation_number_circle(&CircleLiftMap::rigid(alpha + beta), &CirclePoint::zero(), n).unwrap();
        let shift = r1.estimate.scalar().unwrap() - r0.estimate.scalar().unwrap();
        prop_assert!((shift - beta).abs() < 1e-9);
    }

    #[test]
    fn doubling_the_orbit_moves_the_estimate_little(f in arnold(), x0 in 0.0..1.0f64, n in 10usize..5000) {
        let e1 = rotation_number_circle(&f, &CirclePoint::new(x0), n).unwrap().estimate.scalar().unwrap();
        let e2 = rotation_number_circle(&f, &CirclePoint::new(x0), 2 * n).unwrap().estimate.scalar().unwrap();
        prop_assert!((e1 - e2).abs() <= 1.0 / n as f64 + 1.0 / (2 * n) as f64);
    }

    #[test]
    fn rigid_torus_rotation_set_is_a_point(v0 in -1.0..1.0f64, v1 in -1.0..1.0f64) {
        let r = rotation_set_torus(&TorusLiftMap::translation([v0, v1]), 4, 2000).unwrap();
        prop_assert!(r.diameter < 1e-12);
    }

    #[test]
    fn solenoid_levels_are_coherent(f in level2_solenoid(), t in 0.0..1.0f64) {
        let start = SolenoidPoint::from_lift(t, profinite(6, 0));
        let r = rotation_element_solenoid(&f, &start, 20_000, &[2, 4, 6]).unwrap();
        let s = r.solenoid.unwrap();
        prop_assert!(s.coherent, "{} > {}", s.coherence_defect, s.coherence_tolerance);
    }

    #[test]
    fn exact_verdicts_agree(p in -100i64..100, q in 1i64..80, z in -1000i64..1000, depth in 2u32..=7) {
        let cases = [
            GroupPoint::Circle(CirclePoint::from_rational(Ratio::new(p, q))),
            GroupPoint::Profinite(ProfiniteInt::from_integer(depth, z).unwrap()),
            GroupPoint::Solenoid(SolenoidPoint::from_lift_exact(Ratio::new(p, q), profinite(depth, 0))),
        ];
        for g in cases {
            let a = monothetic_test(&g, 64).verdict;
            let b = character_ergodicity_test(&g, 64).verdict;
            if a != Verdict::UndecidableAtDepth && b != Verdict::UndecidableAtDepth {
                prop_assert_eq!(a, b, "{:?}", g);
            }
        }
    }

    #[test]
    fn rational_rotations_have_rational_frequencies(p in 0i64..50, q in 1i64..50, reps in 1usize..40) {
        let n = q as usize * reps;
        let t = Translation::new(GroupPoint::Circle(CirclePoint::from_rational(Ratio::new(p, q))));
        let r = equidistribution_report(&t, Partition::Dyadic { bins: 16 }, n).unwrap();
        for f in r.stats["frequencies"].as_array().unwrap() {
            let k = f.as_f64().unwrap() * q as f64;
            prop_assert!((k - k.round()).abs() < 1e-9, "{}", k);
        }
    }

    #[test]
    fn generator_averages_vanish(z in 1i64..10_000, num in 1i64..120, pick: usize) {
        let depth = 5u32;
        let g = GroupPoint::Profinite(ProfiniteInt::from_integer(depth, z).unwrap());
        prop_assume!(monothetic_test(&g, 64).verdict == Verdict::Positive);
        let ds: Vec<u64> = divisors(120).into_iter().filter(|&d| d > 1).collect();
        let den = ds[pick % ds.len()] as i64;
        prop_assume!(num % den != 0);
        let chi = Character::profinite(Ratio::new(num, den));
        let start = GroupPoint::identity(&g.kind()).unwrap();
        let r = birkhoff_average(&Translation::new(g), &Observable::Character { character: chi }, &start, 1200).unwrap();
        prop_assert!(r.abs < 1e-9, "{}", r.abs);
    }

    #[test]
    fn semiconjugacy_defect_is_a_max(f in arnold(), n in 2000usize..20_000, m in 8usize..200) {
        let rho = rotation_number_circle(&f, &CirclePoint::zero(), n).unwrap().estimate.scalar().unwrap();
        let Ok(t) = build_semiconjugacy(&f, rho, 0.0, n, m) else { return Ok(()) };
        let mut orbit = Vec::with_capacity(n);
        let mut x = 0.0;
        for _ in 0..n {
            orbit.push(x);
            x = f.step_f64(x).0;
        }
        orbit.sort_by(f64::total_cmp);
        let h = |y: f64| orbit.partition_point(|&o| o < frac(y)) as f64 / n as f64;
        for [x, hx] in &t.table {
            prop_assert!((0.0..=1.0).contains(hx));
            let d = frac(h(f.lift(*x)) - hx - rho);
            prop_assert!(d.min(1.0 - d) <= t.defect + 1e-12);
        }
        prop_assert!(t.table.windows(2).all(|w| w[0][1] <= w[1][1]));
    }

    #[test]
    fn periodic_orbits_pin_the_rotation_number(c in 0.0..1.0f64, a in 0.0..0.15f64, p in 0i64..4, q in 1u32..5) {
        let f = CircleLiftMap::arnold(c, a).unwrap();
        if find_periodic_orbit(&f, p, q, 1e-10).is_ok() {
            let n = 10_000;
            let e = rotation_number_circle(&f, &CirclePoint::zero(), n).unwrap().estimate.scalar().unwrap();
            prop_assert!((e - p as f64 / q as f64).abs() <= 1.0 / n as f64);
        }
    }

    #[test]
    fn bounded_solenoid_profiles_project(c in 0.0..1.0f64, t in 0.0..1.0f64) {
        let f = SolenoidLeafMap::rigid(6, c).unwrap();
        let start = SolenoidPoint::from_lift(t, profinite(6, 0));
        let r = bmv_detector(&f, c, 2000, &[start]).unwrap();
        if r.verdict == BmvVerdict::BoundedAtN {
            for b in [1u64, 2, 3] {
                let induced = f.induced(b).unwrap();
                let u = start.project(b).unwrap();
                let ri = bmv_detector(&induced, c, 2000, &[u]).unwrap();
                prop_assert_eq!(ri.verdict, BmvVerdict::BoundedAtN);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn rigid_counts_are_constant_in_n(alpha in 0.0..1.0f64, seed: u64) {
        let m = MapModel::Circle(CircleLiftMap::rigid(alpha));
        let params = EntropyParams { grid: 2049, eps: vec![1.0 / 16.0, 1.0 / 32.0], n_values: vec![1, 4, 16, 64], seed };
        let r = estimate_entropy(&m, &params).unwrap();
        for row in &r.raw_counts {
            prop_assert!(row.iter().all(|&c| c == row[0]), "{:?}", row);
        }
    }

    #[test]
    fn counts_are_monotone(c in 0.0..1.0f64, a in 0.0..0.15f64, seed: u64) {
        let m = MapModel::Circle(CircleLiftMap::arnold(c, a).unwrap());
        let params = EntropyParams { grid: 2049, eps: vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0], n_values: vec![2, 4, 8, 16], seed };
        let r = estimate_entropy(&m, &params).unwrap();
        for row in &r.counts {
            prop_assert!(row.windows(2).all(|w| w[0] <= w[1]));
        }
        for j in 0..params.n_values.len() {
            prop_assert!(r.counts.windows(2).all(|w| w[0][j] <= w[1][j]));
        }
    }
}

#[test]
fn doubling_counts_track_closed_form() {
    for seed in [0, 1, 2] {
        let params = EntropyParams {
            grid: 16385,
            eps: vec![1.0 / 32.0, 1.0 / 64.0],
            n_values: vec![1, 2, 3, 4, 5],
            seed,
        };
        let r = estimate_entropy(&MapModel::Doubling, &params).unwrap();
        for (i, eps) in params.eps.iter().enumerate() {
            for (j, n) in params.n_values.iter().enumerate() {
                let oracle = 2f64.powi(*n as i32 - 1) / eps;
                let ratio = r.raw_counts[i][j] as f64 / oracle;
                assert!((0.5..=2.0).contains(&ratio), "eps {eps} n {n}: {ratio}");
            }
        }
    }
}

#[test]
fn fourier_gram_matrix_is_near_identity() {
    use rotlab_core::translation::{fourier_coefficient, Quadrature};
    use rotlab_core::GroupKind;
    let chars: Vec<Character> = (1..=5).map(|k| Character::Circle { k }).collect();
    for (i, a) in chars.iter().enumerate() {
        for (j, b) in chars.iter().enumerate() {
            let obs = Observable::Character { character: *a };
            let est = fourier_coefficient(&obs, b, &GroupKind::Circle, Quadrature::MonteCarlo { samples: 20_000, seed: 11 })
                .unwrap();
            let target = if i == j { 1.0 } else { 0.0 };
            let se = est.standard_error.unwrap().max(1e-12);
            let dist = (est.re - target).hypot(est.im);
            assert!(dist <= 3.0 * se * std::f64::consts::SQRT_2 + 1e-9, "({i},{j}): {dist} vs se {se}");
        }
    }
}

#[test]
fn torus_points_round_trip_through_orbits() {
    let g = TorusLiftMap::translation([0.25, 0.5]);
    let trace = iterate(&g, &TorusPoint::new(0.0, 0.0), 4);
    assert_eq!(trace.points[4], TorusPoint::new(0.0, 0.0));
}
