mod common;

use std::sync::Arc;

use holodual_core::cyclo::Cyclotomic;
use holodual_core::finab::{
    dual_group, dual_hom, is_isomorphism, pair, smith_normal_form, FiniteAbelianGroup, Hom, QmodZ,
};
use holodual_core::hopf::{
    check_hopf_axioms, double_dual_canonical, dual_hopf, evaluation_pairing_map, function_algebra_hopf,
    group_algebra_hopf, is_hopf_isomorphism, FiniteGroup,
};
use holodual_core::locfun::{psi_iso, LocallyConstantFunction};
use holodual_core::towers::{
    dual_ind, dual_pro, padic, product_pro, pruefer, reflexivity_check_ind, reflexivity_check_pro, ProGroup,
};
use holodual_core::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn matrix_strategy() -> impl Strategy<Value = (Vec<Vec<i64>>, usize)> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        (proptest::collection::vec(proptest::collection::vec(-20i64..=20, c), r), Just(c))
    })
}

fn group_strategy(max_rank: usize, max_factor: u64) -> impl Strategy<Value = FiniteAbelianGroup> {
    proptest::collection::vec(1u64..=max_factor, 0..=max_rank)
        .prop_map(|orders| FiniteAbelianGroup::from_cyclic_orders(&orders).expect("positive orders"))
}

/// A homomorphism from raw integers: entry `k` becomes `k · e_i / gcd(e_i, d_j)`.
fn hom_from_seed(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup, seed: &[i64]) -> Hom {
    let d = source.invariant_factors();
    let e = target.invariant_factors();
    let rows: Vec<Vec<i64>> = e
        .iter()
        .enumerate()
        .map(|(i, &ei)| {
            d.iter()
                .enumerate()
                .map(|(j, &dj)| seed[(i * d.len() + j) % seed.len().max(1)] * (ei / ei.gcd(&dj)) as i64)
                .collect()
        })
        .collect();
    Hom::new(source.clone(), target.clone(), &rows).expect("well defined by construction")
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=5).prop_map(|(p, q)| Rational::new(BigInt::from(p), BigInt::from(q)))
}

fn cyclotomic_strategy(m: u64) -> impl Strategy<Value = Cyclotomic> {
    let phi = holodual_core::cyclo::euler_phi(m) as usize;
    proptest::collection::vec(small_rational(), phi).prop_map(move |c| Cyclotomic::new(m, c).expect("length φ(m)"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn snf_matches_minor_gcds((rows, cols) in matrix_strategy()) {
        let m = common::to_int_matrix(&rows, cols);
        let s = smith_normal_form(&m);
        let reassembled = s.u.mul(&s.d).and_then(|ud| ud.mul(&s.v)).expect("shapes");
        prop_assert_eq!(&reassembled, &m);
        prop_assert!(common::det_bareiss(&s.u.to_rows()).magnitude().is_one());
        prop_assert!(common::det_bareiss(&s.v.to_rows()).magnitude().is_one());
        prop_assert_eq!(s.invariants(), common::invariants_from_minors(&rows, cols));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    prop_assert!(s.d[(i, j)].is_zero());
                }
            }
        }
    }

    #[test]
    fn pairing_is_bilinear_and_nondegenerate(g in group_strategy(3, 12), a in any::<u64>(), b in any::<u64>()) {
        let n = g.order() as usize;
        let x = g.element_at(a as usize % n);
        let y = g.element_at(b as usize % n);
        for chi in dual_group(&g).characters() {
            let lhs = pair(&g, &g.add(&x, &y), &chi).unwrap();
            let rhs = pair(&g, &x, &chi).unwrap().add(pair(&g, &y, &chi).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
        if !x.is_zero() {
            prop_assert!(dual_group(&g).characters().any(|chi| pair(&g, &x, &chi).unwrap() != QmodZ::ZERO));
        }
    }

    #[test]
    fn dual_hom_is_contravariant(
        a in group_strategy(2, 12),
        b in group_strategy(2, 12),
        c in group_strategy(2, 12),
        s1 in proptest::collection::vec(-7i64..=7, 1..6),
        s2 in proptest::collection::vec(-7i64..=7, 1..6),
    ) {
        let f = hom_from_seed(&a, &b, &s1);
        let g = hom_from_seed(&b, &c, &s2);
        let gf = f.then(&g).unwrap();
        prop_assert_eq!(dual_hom(&gf), dual_hom(&g).then(&dual_hom(&f)).unwrap());
        // <f(x), χ> = <x, f'(χ)>
        for x in a.elements().take(24) {
            for chi in dual_group(&b).characters().take(24) {
                prop_assert_eq!(
                    pair(&b, &f.apply(&x).unwrap(), &chi).unwrap(),
                    pair(&a, &x, &dual_hom(&f).apply(&chi).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn snf_injectivity_agrees_with_counting(
        a in group_strategy(2, 10),
        b in group_strategy(2, 10),
        seed in proptest::collection::vec(-5i64..=5, 1..6),
    ) {
        let f = hom_from_seed(&a, &b, &seed);
        let image = common::image_size(&f);
        let kernel = common::kernel_size(&f);
        prop_assert_eq!(image * kernel, a.order());
        prop_assert_eq!(f.image_order(), image);
        prop_assert_eq!(f.is_injective(), kernel == 1);
        prop_assert_eq!(f.is_surjective(), image == b.order());
        prop_assert_eq!(is_isomorphism(&f), kernel == 1 && image == b.order());
    }

    #[test]
    fn cyclotomic_field_laws(
        (m, x, y, z) in prop_oneof![Just(1u64), Just(3), Just(4), Just(5), Just(8), Just(12)].prop_flat_map(|m| {
            (Just(m), cyclotomic_strategy(m), cyclotomic_strategy(m), cyclotomic_strategy(m))
        }),
    ) {
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        if !x.is_zero() {
            prop_assert_eq!(&x * &x.inverse().unwrap(), Cyclotomic::one());
        }
        prop_assert_eq!(x.conjugate().conjugate(), x.clone());
        prop_assert_eq!((&x * &y).conjugate(), &x.conjugate() * &y.conjugate());
        let up = x.embed(m * 3).unwrap();
        prop_assert_eq!(&up, &x);
        prop_assert_eq!(up.restrict(m), Some(x));
    }

    #[test]
    fn decomposition_round_trip_and_inflation(
        p in prop_oneof![Just(2u64), Just(3)],
        level in 1usize..=3,
        up in 0usize..=1,
        values in proptest::collection::vec(small_rational(), 27),
    ) {
        let tower = Arc::new(padic(p, 4).unwrap());
        let n = tower.level(level).unwrap().order() as usize;
        let table: Vec<Cyclotomic> = values.iter().cycle().take(n).cloned().map(Cyclotomic::from_rational).collect();
        let f = LocallyConstantFunction::new(Arc::clone(&tower), level, table).unwrap();
        let d = f.decompose_characters();
        prop_assert_eq!(d.reconstruct(), f.table().to_vec());

        let m = level + up;
        let g = f.inflate(m).unwrap();
        prop_assert_eq!(g.minimal_level(), f.minimal_level());
        prop_assert!(g.same_function(&f).unwrap());
        // c_{χ∘π} = c_χ, and characters not pulled back get 0
        let pi = tower.projection(m, level).unwrap();
        let pull = dual_hom(&pi);
        let dg = g.decompose_characters();
        let low = dual_group(tower.level(level).unwrap());
        let high = dual_group(tower.level(m).unwrap());
        let mut pulled = vec![false; high.order() as usize];
        for chi in low.characters() {
            let image = pull.apply(&chi).unwrap();
            pulled[high.underlying().index_of(&image)] = true;
            prop_assert_eq!(dg.coefficient(&image), d.coefficient(&chi));
        }
        for (i, c) in dg.coefficients().iter().enumerate() {
            if !pulled[i] {
                prop_assert!(c.is_zero());
            }
        }
    }

    #[test]
    fn psi_intertwines_translations(a in group_strategy(2, 4), b in group_strategy(2, 4)) {
        prop_assume!(a.order() <= 16 && b.order() <= 16);
        let psi = psi_iso(&a, &b);
        prop_assert_eq!(psi.rank() as u64, a.order() * b.order());
        prop_assert_eq!(psi.intertwining_witness(&a, &b), None);
    }

    #[test]
    fn tower_reflexivity(p in prop_oneof![Just(2u64), Just(3), Just(5), Just(7)], depth in 1usize..=4) {
        prop_assert!(reflexivity_check_ind(&pruefer(p, depth).unwrap()).passed());
        prop_assert!(reflexivity_check_pro(&padic(p, depth).unwrap()).passed());
        let d = dual_pro(&padic(p, depth).unwrap());
        let q = pruefer(p, depth).unwrap();
        prop_assert_eq!(d.levels(), q.levels());
        prop_assert!(d.transitions().iter().all(Hom::is_injective));
        let e: ProGroup = dual_ind(&pruefer(p, depth).unwrap());
        prop_assert!(e.transitions().iter().all(Hom::is_surjective));
    }
}

#[test]
fn product_pro_is_reflexive() {
    for d in 2..=5 {
        assert!(reflexivity_check_pro(&product_pro(d, 3).unwrap()).passed());
    }
}

fn builtin_groups() -> Vec<FiniteGroup> {
    let mut out: Vec<FiniteGroup> = (1..=12).map(|n| FiniteGroup::cyclic(n).unwrap()).collect();
    let c2 = FiniteGroup::cyclic(2).unwrap();
    let c3 = FiniteGroup::cyclic(3).unwrap();
    out.push(FiniteGroup::product(&c2, &c2));
    out.push(FiniteGroup::product(&FiniteGroup::product(&c2, &c2), &c2));
    out.push(FiniteGroup::product(&c2, &FiniteGroup::cyclic(4).unwrap()));
    out.push(FiniteGroup::product(&c3, &c3));
    out.push(FiniteGroup::symmetric(3).unwrap());
    out.push(FiniteGroup::dihedral(4).unwrap());
    out.push(FiniteGroup::dihedral(5).unwrap());
    out.push(FiniteGroup::quaternion8());
    out.push(FiniteGroup::alternating(4).unwrap());
    out.push(FiniteGroup::symmetric(4).unwrap());
    out.push(FiniteGroup::product(&FiniteGroup::symmetric(3).unwrap(), &c2));
    out
}

#[test]
fn builtin_hopf_algebras_satisfy_axioms_and_duality() {
    for g in builtin_groups() {
        let ga = group_algebra_hopf(&g);
        let fa = function_algebra_hopf(&g);
        assert!(check_hopf_axioms(&ga).passed(), "C[{}]", g.name());
        assert!(check_hopf_axioms(&fa).passed(), "C^{}", g.name());
        assert!(ga.is_cocommutative());
        assert!(fa.is_commutative());
        assert_eq!(ga.is_commutative(), g.is_abelian());
        assert_eq!(fa.is_cocommutative(), g.is_abelian());
        assert!(is_hopf_isomorphism(&evaluation_pairing_map(&g).unwrap()), "{}", g.name());
        for h in [&ga, &fa] {
            let dd = double_dual_canonical(h).unwrap();
            assert!(dd.matrix().is_identity());
            assert!(is_hopf_isomorphism(&dd));
            assert_eq!(dual_hopf(&dual_hopf(h).unwrap()).unwrap().mult_entries(), h.mult_entries());
        }
    }
}
