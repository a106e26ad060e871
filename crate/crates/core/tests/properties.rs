use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use gstar::homology::{h1, infinite_quotient_certificate};
use gstar::knots::{dehn_fill, wirtinger, FillingSlope, KnotTable};
use gstar::normalform::{
    amalgam_reduce, free_product_normal_form, AmalgamSpec, EdgeSpec, FactorSplit, FiniteGroup, FiniteOracle,
    FreeOracle, MembershipOracle, TrivialMembership, VertexSpec, WordOracle,
};
use gstar::pipeline::{construct_f1_f2, OracleChoice};
use gstar::stallings::StallingsGraph;
use gstar::{free_product, smith_normal_form, Alphabet, FinitePresentation, GeneratorMapping, IntMatrix, Letter, Word};

fn raw_letters(k: usize, max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..k, any::<bool>()), 0..=max)
        .prop_map(|v| v.into_iter().map(|(g, inv)| Letter::new(g, inv)).collect())
}

fn word(k: usize, max: usize) -> impl Strategy<Value = Word> {
    raw_letters(k, max).prop_map(Word::from_letters)
}

fn nonempty_word(k: usize, max: usize) -> impl Strategy<Value = Word> {
    word(k, max).prop_filter("nonempty", |w| !w.is_empty())
}

fn names(prefix: &str, k: usize) -> Alphabet {
    let v: Vec<String> = (0..k).map(|i| format!("{prefix}{i}")).collect();
    Alphabet::new(&v).unwrap()
}

fn presentation(prefix: &'static str) -> impl Strategy<Value = FinitePresentation> {
    (1usize..=3)
        .prop_flat_map(move |k| (Just(k), prop::collection::vec(nonempty_word(k, 5), 0..=3)))
        .prop_map(move |(k, rels)| FinitePresentation::new(names(prefix, k), rels).unwrap())
}

proptest! {
    #[test]
    fn reduction_is_idempotent_and_shortening(raw in raw_letters(3, 20)) {
        let w = Word::from_letters(raw.iter().copied());
        prop_assert!(w.len() <= raw.len());
        prop_assert_eq!(Word::from_letters(w.letters().iter().copied()), w.clone());
        prop_assert!(w.mul(&w.inverse()).is_empty());
    }

    #[test]
    fn substitution_is_a_homomorphism(
        u in word(2, 10),
        v in word(2, 10),
        images in prop::collection::vec(word(3, 4), 2),
    ) {
        let m = GeneratorMapping::new(names("g", 2), names("h", 3), images).unwrap();
        prop_assert_eq!(m.apply(&u.mul(&v)).unwrap(), m.apply(&u).unwrap().mul(&m.apply(&v).unwrap()));
    }

    #[test]
    fn free_product_counts_and_associativity(p in presentation("p"), q in presentation("q"), r in presentation("p")) {
        let left = free_product(&free_product(&p, &q).presentation, &r).presentation;
        let right = free_product(&p, &free_product(&q, &r).presentation).presentation;
        prop_assert_eq!(left.generator_count(), p.generator_count() + q.generator_count() + r.generator_count());
        prop_assert_eq!(left.generator_count(), right.generator_count());
        prop_assert_eq!(left.relators().len(), right.relators().len());
        prop_assert_eq!(h1(&left), h1(&right));
    }

    #[test]
    fn h1_of_free_product_is_direct_sum(p in presentation("p"), q in presentation("q")) {
        let pq = free_product(&p, &q).presentation;
        prop_assert_eq!(h1(&pq), h1(&p).direct_sum(&h1(&q)));
    }

    #[test]
    fn free_relation_matrix_has_no_rows(k in 0usize..5) {
        prop_assert_eq!(FinitePresentation::free(names("g", k)).relation_matrix().rows(), 0);
    }

    #[test]
    fn snf_invariant_under_elementary_operations(
        entries in prop::collection::vec(-6i64..=6, 12),
        ops in prop::collection::vec((0usize..4, 0usize..3, 0usize..3, -3i64..=3), 0..40),
    ) {
        let rows: Vec<Vec<i64>> = entries.chunks(4).map(<[i64]>::to_vec).collect();
        let m = IntMatrix::from_rows_i64(3, 4, &rows);
        let mut e = m.clone();
        for (kind, a, b, k) in ops {
            let k = BigInt::from(k);
            match kind {
                0 => e.swap_rows(a, b),
                1 => e.swap_cols(a, b + 1),
                2 if a != b => e.add_row_multiple(a, b, &k),
                3 if a != b + 1 => e.add_col_multiple(a, b + 1, &k),
                _ => e.negate_row(a),
            }
        }
        prop_assert_eq!(smith_normal_form(&e), smith_normal_form(&m));
    }

    #[test]
    fn stallings_membership_round_trips(
        gens in prop::collection::vec(nonempty_word(2, 5), 1..=3),
        expr in word(3, 6),
    ) {
        let g = StallingsGraph::from_generators(&gens, 2).unwrap();
        prop_assert!(g.rank() <= gens.len());
        prop_assert_eq!(g.generators_are_free_basis(), g.rank() == gens.len());
        let e = Word::from_letters(expr.letters().iter().filter(|l| l.generator() < gens.len()).copied());
        let w = e.substitute(&gens);
        let found = g.express(&w);
        prop_assert!(found.is_some());
        prop_assert_eq!(found.unwrap().substitute(&gens), w.clone());
        let basis = g.basis_words();
        prop_assert_eq!(g.membership(&w).unwrap().substitute(&basis), w);
    }

    #[test]
    fn basis_subsets_are_malnormal(mask in 1u32..32) {
        let gens: Vec<Word> = (0..5).filter(|i| mask >> i & 1 == 1).map(Word::generator).collect();
        prop_assert!(StallingsGraph::from_generators(&gens, 5).unwrap().is_malnormal());
    }

    #[test]
    fn trivial_edges_match_free_product(w in word(4, 14)) {
        let free = |p: &str| -> Arc<dyn WordOracle> { Arc::new(FreeOracle::on(names(p, 2))) };
        let z3: Arc<dyn WordOracle> = Arc::new(FiniteOracle::new(names("c", 2), FiniteGroup::cyclic(3), vec![1, 2]).unwrap());
        for (a, b) in [(free("a"), free("b")), (z3.clone(), free("b"))] {
            let vertex = |name: &str, o: &Arc<dyn WordOracle>| VertexSpec {
                name: name.into(),
                presentation: FinitePresentation::free(o.alphabet().clone()),
                oracle: Some(o.clone()),
            };
            let ta: Arc<dyn MembershipOracle> = Arc::new(TrivialMembership::new(a.clone()));
            let tb: Arc<dyn MembershipOracle> = Arc::new(TrivialMembership::new(b.clone()));
            let spec = AmalgamSpec::new(
                vec![vertex("A", &a), vertex("B", &b)],
                vec![EdgeSpec::new(0, 1, vec![], vec![]).with_membership(ta, tb)],
            ).unwrap();
            let split = FactorSplit::contiguous(vec![a.clone(), b.clone()]);
            let nf = free_product_normal_form(&w, &split).unwrap();
            let seq = amalgam_reduce(&w, &spec).unwrap();
            prop_assert_eq!(nf.len(), seq.len());
            prop_assert!(amalgam_reduce(&w.mul(&w.inverse()), &spec).unwrap().is_empty());
        }
        // free vertices, trivial edge: triviality is free reduction
        let a = free("a");
        let b = free("b");
        let split = FactorSplit::contiguous(vec![a, b]);
        prop_assert_eq!(free_product_normal_form(&w, &split).unwrap().is_empty(), w.is_empty());
    }

    #[test]
    fn certificates_decline_on_finite_groups(
        (m, k) in (2i64..7, 2i64..7).prop_filter("spherical", |&(m, k)| 2 * (m + k) > m * k),
        extra in word(2, 6),
    ) {
        // <a, b | a^m, b^2, (ab)^k> is finite exactly when 1/m + 1/k > 1/2
        let a = Word::power_of(0, m);
        let b = Word::power_of(1, 2);
        let ab = Word::generator(0).mul(&Word::generator(1)).pow(k);
        let p = FinitePresentation::new(names("g", 2), vec![a, b, ab]).unwrap();
        prop_assert!(!infinite_quotient_certificate(&p, &[extra]));
        prop_assert!(h1(&p).is_finite());
    }

    #[test]
    fn f1_membership_round_trips(e in word(3, 8)) {
        let g = FinitePresentation::from_strs(&["b"], &["b b"]).unwrap();
        let o = FiniteOracle::new(g.alphabet().clone(), FiniteGroup::cyclic(2), vec![1]).unwrap();
        let pg = construct_f1_f2(&g, &OracleChoice::Finite(o)).unwrap();
        let m = pg.f1_membership().unwrap();
        let w = e.substitute(&pg.f1.words);
        prop_assert_eq!(m.rewrite(&w, 12).unwrap(), Some(e));
    }
}

#[test]
fn knot_structural_invariants() {
    let table = KnotTable::bundled();
    for d in table.iter() {
        let w = wirtinger(d);
        let p = &w.presentation;
        let arcs = if d.is_unknot_keyword() { 1 } else { d.crossings.len() };
        assert_eq!(p.generator_count(), arcs, "{}", d.name);
        let lsum: i64 = w.peripheral.longitude.exponent_sums(p.generator_count()).iter().sum();
        assert_eq!(lsum, 0, "{}", d.name);
        let f = dehn_fill(p, &w.peripheral, FillingSlope::new(3, 2).unwrap());
        assert_eq!(f.generator_count(), p.generator_count());
        assert_eq!(f.relators().len(), p.relators().len() + 1, "{}", d.name);
    }
}
