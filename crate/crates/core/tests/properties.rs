mod common;

use std::sync::Arc;

use modclass::classify::{count_absolutely_simple, extension_components, fiber, sigma_fiber, up_relation};
use modclass::finite_field::{automorphisms, embed, make_field, FiniteField};
use modclass::green::{green_correspondent, is_relatively_projective, source, sources, vertex};
use modclass::linalg::Matrix;
use modclass::meataxe::{
    composition_factors, decompose, end_structure, is_component, is_isomorphic, is_simple, same_summand_types,
    seeded_rng, simple_modules,
};
use modclass::modrep::{
    direct_sum_all, end_space, extend_scalars, hom_space, induce, regular_module, restrict_scalars, restrict_subgroup,
    Rep,
};
use modclass::perm_group::{
    catalog_group, conjugacy_classes, normalizer, p_part, p_subgroups_up_to_conjugacy, right_transversal, PermGroup,
    Subgroup,
};
use proptest::prelude::*;
use rand::Rng;

use common::{one_dim_modules, random_module, BATTERY};

const GROUPS: [&str; 9] = ["C2", "C3", "C5", "C7", "S3", "A4", "D8", "Q8", "S4"];

fn battery(i: usize) -> (Arc<PermGroup>, Arc<FiniteField>) {
    let (name, p) = BATTERY[i];
    (catalog_group(name).unwrap(), make_field(p, 1).unwrap())
}

fn simples_of(i: usize) -> Vec<Rep> {
    let (g, f) = battery(i);
    simple_modules(&g, &f, 0).unwrap().modules
}

/// Indecomposable components of a random module of the battery entry.
fn random_indecomposables(i: usize, seed: u64, max_dim: usize) -> Vec<Rep> {
    let (g, f) = battery(i);
    let mut rng = seeded_rng(seed);
    let m = random_module(&g, &f, max_dim, &mut rng);
    decompose(&m, 0).unwrap().summands.into_iter().map(|(r, _)| r).collect()
}

/// Field sizes small enough to enumerate: (p, n) with p^n <= 4096.
fn small_field() -> impl Strategy<Value = (u32, u32)> {
    prop_oneof![
        (Just(2u32), 1u32..=12),
        (Just(3u32), 1u32..=7),
        (Just(5u32), 1u32..=5),
        (Just(7u32), 1u32..=4),
    ]
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn light() -> ProptestConfig {
    ProptestConfig::with_cases(24)
}

fn heavy() -> ProptestConfig {
    ProptestConfig::with_cases(8)
}

// ---------------------------------------------------------------------------
// Fields

proptest! {
    #![proptest_config(light())]

    #[test]
    fn embedding_triangle_commutes((p, n) in small_field(), pick in any::<prop::sample::Index>()) {
        // every chain m | k | n
        let chains: Vec<(u32, u32)> = divisors(n)
            .into_iter()
            .flat_map(|k| divisors(k).into_iter().map(move |m| (m, k)))
            .collect();
        let (m, k) = chains[pick.index(chains.len())];
        let (fm, fk, fn_) = (make_field(p, m).unwrap(), make_field(p, k).unwrap(), make_field(p, n).unwrap());
        let (mk, kn, mn) = (embed(&fm, &fk).unwrap(), embed(&fk, &fn_).unwrap(), embed(&fm, &fn_).unwrap());
        for a in fm.elements() {
            prop_assert_eq!(mn.apply(a), kn.apply(mk.apply(a)));
        }
    }

    #[test]
    fn embedding_is_a_ring_morphism((p, n) in small_field(), pick in any::<prop::sample::Index>(), a in any::<u32>(), b in any::<u32>()) {
        let ds = divisors(n);
        let m = ds[pick.index(ds.len())];
        let (src, dst) = (make_field(p, m).unwrap(), make_field(p, n).unwrap());
        let e = embed(&src, &dst).unwrap();
        // the generator image is a root of the source's defining polynomial
        let x = e.image_of_generator();
        let mut value = 0;
        for &c in src.min_poly().iter().rev() {
            value = dst.add(dst.mul(value, x), dst.from_int(c as i64));
        }
        prop_assert_eq!(value, 0);
        let (a, b) = (a % src.order(), b % src.order());
        prop_assert_eq!(e.apply(src.add(a, b)), dst.add(e.apply(a), e.apply(b)));
        prop_assert_eq!(e.apply(src.mul(a, b)), dst.mul(e.apply(a), e.apply(b)));
    }

    #[test]
    fn frobenius_fixes_exactly_the_prime_field((p, n) in small_field()) {
        let f = make_field(p, n).unwrap();
        let prime = make_field(p, 1).unwrap();
        let image: Vec<u32> = {
            let e = embed(&prime, &f).unwrap();
            let mut v: Vec<u32> = prime.elements().map(|a| e.apply(a)).collect();
            v.sort();
            v
        };
        let fixed: Vec<u32> = f.elements().filter(|&a| f.pow(a, p as u64) == a).collect();
        prop_assert_eq!(fixed, image);
    }

    #[test]
    fn automorphisms_form_a_cyclic_group((p, n) in small_field()) {
        let f = make_field(p, n).unwrap();
        let auts = automorphisms(&f);
        prop_assert_eq!(auts.len(), n as usize);
        let tables: Vec<Vec<u32>> = auts.iter().map(|s| f.elements().map(|a| s.apply(a)).collect()).collect();
        for i in 0..auts.len() {
            for j in 0..i {
                prop_assert_ne!(&tables[i], &tables[j]);
            }
        }
        // sigma^i o sigma^j = sigma^(i+j mod n), checked as maps
        for (i, s) in auts.iter().enumerate() {
            for (j, t) in auts.iter().enumerate() {
                let c = s.compose(t);
                let composed: Vec<u32> = f.elements().map(|a| c.apply(a)).collect();
                let direct: Vec<u32> = f.elements().map(|a| s.apply(t.apply(a))).collect();
                prop_assert_eq!(&composed, &direct);
                prop_assert_eq!(&composed, &tables[(i + j) % n as usize]);
            }
        }
    }

    #[test]
    fn field_axioms((p, n) in small_field(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = make_field(p, n).unwrap();
        let q = f.order();
        let (a, b, c) = (a % q, b % q, c % q);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), 1);
            prop_assert_eq!(f.inv_by_euclid(a).unwrap(), f.inv(a));
            prop_assert_eq!(f.pow(a, (q - 1) as u64), 1);
        }
        prop_assert_eq!(f.coeffs(a).len(), n as usize);
        prop_assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
    }
}

// ---------------------------------------------------------------------------
// Groups

proptest! {
    #![proptest_config(light())]

    #[test]
    fn class_equation(gi in 0..GROUPS.len()) {
        let g = catalog_group(GROUPS[gi]).unwrap();
        let classes = conjugacy_classes(&g);
        prop_assert_eq!(classes.iter().map(Vec::len).sum::<usize>(), g.order());
        let mut all: Vec<usize> = classes.into_iter().flatten().collect();
        all.sort();
        prop_assert_eq!(all, (0..g.order()).collect::<Vec<_>>());
    }

    #[test]
    fn p_subgroups_have_p_power_order(gi in 0..GROUPS.len(), p in prop::sample::select(vec![2u32, 3, 5, 7])) {
        let g = catalog_group(GROUPS[gi]).unwrap();
        let reps = p_subgroups_up_to_conjugacy(&g, p);
        let sylow = p_part(g.order(), p);
        for q in &reps {
            prop_assert_eq!(p_part(q.order(), p), q.order());
            prop_assert_eq!(g.order() % q.order(), 0);
        }
        // maximal ones under subconjugacy are exactly the Sylow subgroups
        for q in &reps {
            let maximal = !reps.iter().any(|r| r.order() > q.order() && q.is_subconjugate_to(r));
            prop_assert_eq!(maximal, q.order() == sylow);
        }
    }

    #[test]
    fn transversal_cosets_partition_the_group(gi in 0..GROUPS.len(), x in any::<prop::sample::Index>(), y in any::<prop::sample::Index>()) {
        let g = catalog_group(GROUPS[gi]).unwrap();
        let h = Subgroup::generated_by(&g, &[x.index(g.order()), y.index(g.order())]);
        let t = right_transversal(&g, &h);
        prop_assert_eq!(t.len() * h.order(), g.order());
        let mut seen = vec![false; g.order()];
        for &r in &t {
            for &a in h.elements() {
                let z = g.mul(a, r);
                prop_assert!(!seen[z]);
                seen[z] = true;
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
    }
}

// ---------------------------------------------------------------------------
// Modules

/// Hom dimension by brute force over all matrices; only for tiny cases.
fn brute_hom_dim(v: &Rep, u: &Rep) -> usize {
    let f = v.field();
    let cells = v.dim() * u.dim();
    let total = (f.order() as u64).pow(cells as u32);
    let mut count = 0u64;
    for mut t in 0..total {
        let mut data = Vec::with_capacity(cells);
        for _ in 0..cells {
            data.push((t % f.order() as u64) as u32);
            t /= f.order() as u64;
        }
        if v.is_hom_to(u, &Matrix::from_vec(v.dim(), u.dim(), data)) {
            count += 1;
        }
    }
    count.ilog(f.order() as u64) as usize
}

proptest! {
    #![proptest_config(light())]

    #[test]
    fn hom_space_matches_brute_force(i in 0..BATTERY.len(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let (g, f) = battery(i);
        let v = random_module(&g, &f, 4, &mut seeded_rng(s1));
        let u = random_module(&g, &f, 4, &mut seeded_rng(s2));
        prop_assume!((f.order() as u64).pow((v.dim() * u.dim()) as u32) <= 1 << 12);
        let hom = hom_space(&v, &u).unwrap();
        for m in &hom.basis {
            prop_assert!(v.is_hom_to(&u, m));
        }
        prop_assert_eq!(hom.dim(), brute_hom_dim(&v, &u));
    }

    #[test]
    fn summand_of_restricted_induction(gi in 0..GROUPS.len(), p in prop::sample::select(vec![2u32, 3]), x in any::<prop::sample::Index>(), pick in any::<prop::sample::Index>()) {
        let g = catalog_group(GROUPS[gi]).unwrap();
        let f = make_field(p, 1).unwrap();
        let h = Subgroup::generated_by(&g, &[x.index(g.order())]);
        let ones = one_dim_modules(&h, &f);
        let u = &ones[pick.index(ones.len())];
        let back = restrict_subgroup(&induce(u, &h).unwrap(), &h).unwrap();
        prop_assert_eq!(back.dim(), u.dim() * g.order() / h.order());
        prop_assert!(is_component(u, &back).unwrap());
    }
}

proptest! {
    #![proptest_config(heavy())]

    #[test]
    fn extension_of_restriction_of_defined_module(i in 0..BATTERY.len(), pick in any::<prop::sample::Index>(), n in 2u32..=3) {
        let ws = simples_of(i);
        let w = &ws[pick.index(ws.len())];
        let p = w.field().characteristic();
        let (f, l) = (make_field(p, 1).unwrap(), make_field(p, n).unwrap());
        let v = extend_scalars(w, &l).unwrap();
        let round_trip = extend_scalars(&restrict_scalars(&v, &f).unwrap(), &l).unwrap();
        let copies = direct_sum_all(&vec![v.clone(); n as usize]).unwrap();
        let a = decompose(&round_trip, 0).unwrap();
        let b = decompose(&copies, 0).unwrap();
        prop_assert!(same_summand_types(&a, &b).unwrap());
    }

    #[test]
    fn extension_and_restriction_agree(i in 0..BATTERY.len(), n in 2u32..=3) {
        let ws = simples_of(i);
        for (wi, w) in ws.iter().enumerate() {
            for (u, _) in extension_components(w, n).unwrap() {
                let res = restrict_scalars(&u, w.field()).unwrap();
                for (wj, w2) in ws.iter().enumerate() {
                    let down = is_component(w2, &res).unwrap();
                    let up = is_component(&u, &extend_scalars(w2, u.field()).unwrap()).unwrap();
                    prop_assert_eq!(down, up);
                    prop_assert_eq!(down, wi == wj);
                }
            }
        }
    }

    #[test]
    fn restriction_dimension_identity(i in 0..BATTERY.len(), n in 1u32..=4) {
        for w in simples_of(i) {
            for (v, _) in extension_components(&w, n).unwrap() {
                let res = decompose(&restrict_scalars(&v, w.field()).unwrap(), 0).unwrap();
                let s: usize = res.summands.iter().map(|(_, m)| m).sum();
                prop_assert_eq!(s * w.dim(), n as usize * v.dim());
                for (c, _) in &res.summands {
                    prop_assert!(is_isomorphic(c, &w).unwrap());
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// MeatAxe

proptest! {
    #![proptest_config(heavy())]

    #[test]
    fn krull_schmidt_is_seed_independent(i in 0..BATTERY.len(), module_seed in any::<u64>(), seed in 1u64..1000) {
        let (g, f) = battery(i);
        let m = random_module(&g, &f, 12, &mut seeded_rng(module_seed));
        let a = decompose(&m, 0).unwrap();
        let b = decompose(&m, seed).unwrap();
        prop_assert!(same_summand_types(&a, &b).unwrap());
    }

    #[test]
    fn decomposition_blocks_are_exact(i in 0..BATTERY.len(), module_seed in any::<u64>()) {
        let (g, f) = battery(i);
        let m = random_module(&g, &f, 12, &mut seeded_rng(module_seed));
        let d = decompose(&m, 0).unwrap();
        prop_assert_eq!(d.block_dims().iter().sum::<usize>(), m.dim());
        let b = &d.basis_change;
        let b_inv = b.inverse(&f).unwrap();
        for (k, gen) in m.generators().iter().enumerate() {
            let conj = b.mul(&f, gen).mul(&f, &b_inv);
            let blocks: Vec<&Matrix> = d.components().iter().map(|r| &r.generators()[k]).collect();
            prop_assert_eq!(&conj, &Matrix::block_diag(&blocks));
        }
    }

    #[test]
    fn composition_factors_are_known_simples(i in 0..BATTERY.len(), module_seed in any::<u64>()) {
        let (g, f) = battery(i);
        let set = simple_modules(&g, &f, 0).unwrap();
        let m = random_module(&g, &f, 12, &mut seeded_rng(module_seed));
        for w in composition_factors(&m, module_seed).unwrap() {
            prop_assert!(set.position(&w).unwrap().is_some());
        }
    }

    #[test]
    fn simplicity_answer_is_seed_independent(i in 0..BATTERY.len(), module_seed in any::<u64>(), seed in any::<u64>()) {
        let (g, f) = battery(i);
        let m = random_module(&g, &f, 8, &mut seeded_rng(module_seed));
        prop_assert_eq!(is_simple(&m, 0).unwrap().simple, is_simple(&m, seed).unwrap().simple);
    }

    #[test]
    fn extension_splits_into_gcd_many_types(i in 0..BATTERY.len(), n in 1u32..=4) {
        for w in simples_of(i) {
            let m = end_space(&w).dim();
            let comps = extension_components(&w, n).unwrap();
            prop_assert_eq!(comps.len(), gcd(m, n as usize));
            prop_assert!(comps.iter().all(|(_, mult)| *mult == 1));
            let degrees: Vec<usize> = comps.iter().map(|(u, _)| end_space(u).dim()).collect();
            prop_assert!(degrees.iter().all(|&d| d == degrees[0]));
        }
    }
}

#[test]
fn endomorphisms_of_simples_commute() {
    for i in 0..BATTERY.len() {
        let (_, f) = battery(i);
        for w in simples_of(i) {
            let basis = end_space(&w).basis;
            for a in &basis {
                for b in &basis {
                    assert_eq!(a.mul(&f, b), b.mul(&f, a));
                }
            }
        }
    }
}

#[test]
fn simple_set_covers_the_regular_module_once() {
    for i in 0..BATTERY.len() {
        let (g, f) = battery(i);
        let set = simple_modules(&g, &f, 0).unwrap();
        for w in composition_factors(&regular_module(&g, &f), 3).unwrap() {
            let hits = set.modules.iter().filter(|s| is_isomorphic(s, &w).unwrap()).count();
            assert_eq!(hits, 1);
        }
    }
}

// ---------------------------------------------------------------------------
// Vertices

/// `V | Ind_Q Res_Q V` computed from a full decomposition.
fn ind_res_oracle(v: &Rep, q: &Subgroup) -> bool {
    let m = induce(&restrict_subgroup(v, q).unwrap(), q).unwrap();
    decompose(&m, 0)
        .unwrap()
        .summands
        .iter()
        .any(|(u, _)| is_isomorphic(u, v).unwrap())
}

proptest! {
    #![proptest_config(heavy())]

    #[test]
    fn higman_matches_induction_oracle(i in 0..BATTERY.len(), module_seed in any::<u64>()) {
        let (g, f) = battery(i);
        for v in random_indecomposables(i, module_seed, 8) {
            for q in p_subgroups_up_to_conjugacy(&g, f.characteristic()) {
                prop_assert_eq!(is_relatively_projective(&v, &q).unwrap().projective, ind_res_oracle(&v, &q));
            }
        }
    }

    #[test]
    fn minimal_projectivity_subgroups_are_conjugate(i in 0..BATTERY.len(), module_seed in any::<u64>()) {
        let (g, f) = battery(i);
        for v in random_indecomposables(i, module_seed, 8) {
            let projective: Vec<Subgroup> = p_subgroups_up_to_conjugacy(&g, f.characteristic())
                .into_iter()
                .filter(|q| is_relatively_projective(&v, q).unwrap().projective)
                .collect();
            let minimal: Vec<&Subgroup> = projective
                .iter()
                .filter(|q| !projective.iter().any(|r| r.order() < q.order() && r.is_subconjugate_to(q)))
                .collect();
            let vx = vertex(&v).unwrap();
            for q in minimal {
                prop_assert!(q.is_conjugate_in_parent(&vx));
            }
            let src = source(&v, &vx).unwrap();
            prop_assert!(is_component(&src, &restrict_subgroup(&v, &vx).unwrap()).unwrap());
            prop_assert!(is_component(&v, &induce(&src, &vx).unwrap()).unwrap());
        }
    }
}

/// Vertex, source and correspondent are carried along the fiber.
#[test]
fn green_data_along_fibers() {
    for i in 0..BATTERY.len() {
        let (g, _) = battery(i);
        for w in simples_of(i) {
            let q = vertex(&w).unwrap();
            let h = normalizer(&g, &q);
            let src = source(&w, &q).unwrap();
            let gr = green_correspondent(&w, &q, &h).unwrap();
            for n in 2..=3 {
                let l = make_field(w.field().characteristic(), n).unwrap();
                let src_l = extend_scalars(&src, &l).unwrap();
                let gr_l = extend_scalars(&gr, &l).unwrap();
                for (v, _) in extension_components(&w, n).unwrap() {
                    let qv = vertex(&v).unwrap();
                    assert!(qv.is_conjugate_in_parent(&q));
                    let some_source = sources(&v, &q)
                        .unwrap()
                        .iter()
                        .any(|s| is_component(s, &src_l).unwrap());
                    assert!(some_source);
                    let gv = green_correspondent(&v, &q, &h).unwrap();
                    assert!(is_component(&gv, &gr_l).unwrap());
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Classification

proptest! {
    #![proptest_config(heavy())]

    #[test]
    fn up_relation_is_reflexive_and_transitive(i in 0..BATTERY.len(), pick in any::<prop::sample::Index>()) {
        let ws = simples_of(i);
        let w = &ws[pick.index(ws.len())];
        prop_assert!(up_relation(w, w).unwrap());
        for (u, _) in extension_components(w, 2).unwrap() {
            prop_assert!(up_relation(&u, &u).unwrap());
            prop_assert!(up_relation(w, &u).unwrap());
            let l4 = make_field(w.field().characteristic(), 4).unwrap();
            for (x, _) in decompose(&extend_scalars(&u, &l4).unwrap(), 0).unwrap().summands {
                prop_assert!(up_relation(&u, &x).unwrap());
                prop_assert!(up_relation(w, &x).unwrap());
            }
        }
    }

    #[test]
    fn simplicity_is_constant_on_fibers(i in 0..BATTERY.len(), module_seed in any::<u64>()) {
        let (g, f) = battery(i);
        let mut rng = seeded_rng(module_seed);
        let mut subjects = simples_of(i);
        subjects.extend(decompose(&regular_module(&g, &f), 0).unwrap().summands.into_iter().map(|(r, _)| r));
        let w = &subjects[rng.gen_range(0..subjects.len())];
        let simple = is_simple(w, 0).unwrap().simple;
        for e in fiber(w, 3).unwrap() {
            prop_assert_eq!(is_simple(&e.entry.module, 0).unwrap().simple, simple);
            prop_assert!(end_structure(&e.entry.module).unwrap().is_local());
        }
    }
}

#[test]
fn report_total_is_the_sum_of_fibers() {
    for i in 0..BATTERY.len() {
        let (g, f) = battery(i);
        let report = count_absolutely_simple(&g, f.characteristic(), 0).unwrap();
        let sum: usize = report.rows.iter().map(|r| r.fiber_size).sum();
        assert_eq!(report.total, sum);
        assert_eq!(report.agree, report.total == report.oracle);
        let direct: usize = simples_of(i).iter().map(|w| sigma_fiber(w).unwrap().len()).sum();
        assert_eq!(direct, report.total);
    }
}
