use poset_ramsey::extremal::{diamond_bounds, fork_bounds};
use poset_ramsey::lattice::{Color, ColorTable, Vertex};
use poset_ramsey::posets::{brute_force_copy_exists, find_mono_copy, make_poset, EmbeddingKind, FinitePoset};
use poset_ramsey::ramsey_search::{
    exists_good_coloring, ramsey_number_exact, weak_ramsey_exact, GoodColoring, RamseyOutcome, SearchConfig, SearchResult,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn exact(outcome: RamseyOutcome) -> SearchResult {
    match outcome {
        RamseyOutcome::Exact(r) => r,
        other => panic!("undecided: {other:?}"),
    }
}

fn induced(p: &str, q: &str) -> SearchResult {
    exact(ramsey_number_exact(&make_poset(p).unwrap(), &make_poset(q).unwrap(), 6, &SearchConfig::default()).unwrap())
}

fn weak(p: &str, q: &str) -> SearchResult {
    exact(weak_ramsey_exact(&make_poset(p).unwrap(), &make_poset(q).unwrap(), 6, &SearchConfig::default()).unwrap())
}

fn has_copies(table: &ColorTable, p: &FinitePoset, q: &FinitePoset, kind: EmbeddingKind) -> bool {
    find_mono_copy(table, p, Color::Blue, kind).is_some() || find_mono_copy(table, q, Color::Red, kind).is_some()
}

/// The witness at `value − 1` is good, and random colorings at `value` are not.
fn check_result(r: &SearchResult, p: &FinitePoset, q: &FinitePoset) {
    if let Some(w) = &r.witness {
        assert_eq!(w.dimension(), r.value - 1);
        assert!(!has_copies(w, p, q, r.kind), "witness for {}/{} is not good", r.p, r.q);
        if w.dimension() <= 4 && p.len() <= 6 && q.len() <= 6 {
            assert!(!brute_force_copy_exists(w, p, Color::Blue, r.kind).unwrap());
            assert!(!brute_force_copy_exists(w, q, Color::Red, r.kind).unwrap());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(r.value as u64);
    for _ in 0..100 {
        let t = ColorTable::from_fn(r.value, |_| if rng.gen_bool(0.5) { Color::Blue } else { Color::Red }).unwrap();
        assert!(has_copies(&t, p, q, r.kind));
    }
}

#[test]
fn two_chain_on_one_and_two_elements() {
    let c2 = FinitePoset::chain(2);
    match exists_good_coloring(1, &c2, &c2, &SearchConfig::default()).unwrap().0 {
        GoodColoring::Found(t) => {
            assert_eq!(t.color_of(&Vertex::empty()).unwrap(), Color::Red);
            assert_eq!(t.color_of(&Vertex::from_members([0])).unwrap(), Color::Blue);
        }
        other => panic!("expected a coloring, got {other:?}"),
    }
    assert_eq!(exists_good_coloring(2, &c2, &c2, &SearchConfig::default()).unwrap().0, GoodColoring::NotFound);
    // Independent check: every coloring of Q_2 repeats a color on the chain ∅ ⊂ {0} ⊂ {0,1}.
    for bits in 0u32..16 {
        let c = |i: u32| bits >> i & 1;
        assert!(c(0b00) == c(0b01) || c(0b01) == c(0b11) || c(0b00) == c(0b11));
    }
}

#[test]
fn q3_has_a_good_coloring_for_q2() {
    let q2 = FinitePoset::boolean(2).unwrap();
    match exists_good_coloring(3, &q2, &q2, &SearchConfig::default()).unwrap().0 {
        GoodColoring::Found(t) => assert!(!has_copies(&t, &q2, &q2, EmbeddingKind::Induced)),
        other => panic!("expected a coloring, got {other:?}"),
    }
}

#[test]
fn small_exact_values() {
    for (p, q, value) in [("boolean:1", "boolean:1", 2), ("boolean:2", "boolean:2", 4), ("boolean:2", "boolean:3", 5)] {
        let r = induced(p, q);
        assert_eq!(r.value, value, "R({p}, {q})");
        check_result(&r, &make_poset(p).unwrap(), &make_poset(q).unwrap());
    }
}

#[test]
fn diamond_and_fork_values_lie_in_their_brackets() {
    let r = induced("fork:2", "fork:2");
    let f = fork_bounds(2).unwrap();
    assert!((3..=5).contains(&r.value));
    assert!(f.lower as usize <= r.value && r.value <= f.upper as usize);
    check_result(&r, &FinitePoset::fork(2), &FinitePoset::fork(2));

    let r = induced("diamond:2", "diamond:2");
    let d = diamond_bounds(2).unwrap();
    assert!(d.lower as usize <= r.value && r.value <= d.upper as usize);
    // D_2 is Q_2.
    assert_eq!(r.value, 4);
}

#[test]
fn weak_values_never_exceed_induced_values() {
    assert_eq!(weak("chain:2", "chain:2").value, 2);
    for spec in ["antichain:2", "boolean:2", "fork:2", "chain:3"] {
        let (w, i) = (weak(spec, spec), induced(spec, spec));
        assert!(w.value <= i.value, "{spec}: weak {} > induced {}", w.value, i.value);
        let p = make_poset(spec).unwrap();
        check_result(&w, &p, &p);
    }
    assert!(weak("boolean:2", "boolean:2").value <= 4);
}

#[test]
fn color_symmetry_does_not_change_decisions() {
    let plain = SearchConfig { use_color_symmetry: false, ..SearchConfig::default() };
    for spec in ["chain:2", "chain:3", "antichain:2", "fork:2", "boolean:2"] {
        let p = make_poset(spec).unwrap();
        for dim in 0..=3 {
            for kind in [EmbeddingKind::Induced, EmbeddingKind::Weak] {
                let with = exists_good_coloring(dim, &p, &p, &SearchConfig { kind, ..SearchConfig::default() }).unwrap().0;
                let without = exists_good_coloring(dim, &p, &p, &SearchConfig { kind, ..plain.clone() }).unwrap().0;
                assert_eq!(with == GoodColoring::NotFound, without == GoodColoring::NotFound, "{spec} at {dim} ({kind})");
            }
        }
    }
}

#[test]
fn threads_agree_with_sequential_search() {
    let p = FinitePoset::boolean(2).unwrap();
    for dim in 2..=4 {
        let seq = exists_good_coloring(dim, &p, &p, &SearchConfig::default()).unwrap().0;
        let par = exists_good_coloring(dim, &p, &p, &SearchConfig { threads: 4, ..SearchConfig::default() }).unwrap().0;
        assert_eq!(seq == GoodColoring::NotFound, par == GoodColoring::NotFound);
        if let GoodColoring::Found(t) = par {
            assert!(!has_copies(&t, &p, &p, EmbeddingKind::Induced));
        }
    }
}

#[test]
fn tiny_budget_is_unknown_not_notfound() {
    let p = FinitePoset::boolean(2).unwrap();
    let config = SearchConfig { node_budget: Some(3), ..SearchConfig::default() };
    assert_eq!(exists_good_coloring(4, &p, &p, &config).unwrap().0, GoodColoring::Unknown);
    assert!(matches!(ramsey_number_exact(&p, &p, 6, &config).unwrap(), RamseyOutcome::Unknown { .. }));
}
