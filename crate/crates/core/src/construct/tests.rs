use super::*;
use crate::cert::Certificate;
use crate::groups::{make_group, ComponentKind, Group, GroupElem, GroupKind};
use crate::sets::Evaluator;

const BUDGET: u64 = 100_000;

fn z() -> Group {
    make_group(&GroupKind::FreeAbelian { rank: 1 }).unwrap()
}

fn sum6() -> Group {
    make_group(&GroupKind::DirectSum {
        components: vec![ComponentKind::Z; 6],
    })
    .unwrap()
}

fn fmt(g: &Group, v: &[GroupElem]) -> Vec<String> {
    v.iter().map(|x| g.format(x)).collect()
}

#[test]
fn pair_product_is_deterministic_and_clean() {
    let g = z();
    let w = build_pair_product(&g, 6, BUDGET).unwrap();
    // first admissible in canonical order pins the sequences
    assert_eq!(fmt(&g, &w.a_seq), ["0", "-2", "3", "-8", "10", "-17"]);
    assert_eq!(fmt(&g, &w.b_seq), ["0", "-2", "5", "-11", "23", "-43"]);
    assert_eq!(w.elements(&g).len(), 21);
    assert!(w.transcript.iter().all(|i| i.result != "violated"));

    let again = build_pair_product(&g, 6, BUDGET).unwrap();
    assert_eq!(w.a_seq, again.a_seq);
    assert_eq!(w.b_seq, again.b_seq);
    assert_eq!(w.transcript, again.transcript);

    verify_pair_conditions(&g, &w.to_doc(&g)).unwrap();
}

#[test]
fn pair_product_degenerate_count() {
    let g = z();
    let w = build_pair_product(&g, 1, BUDGET).unwrap();
    let elems = w.elements(&g);
    assert_eq!(elems, vec![g.identity()]);
    // only the self-pair block exists, nothing to separate
    assert!(w
        .transcript
        .iter()
        .all(|i| i.condition == "prefix_free_of_small_fp_patterns"));
}

#[test]
fn pair_product_transcript_tamper_detection() {
    let g = z();
    let w = build_pair_product(&g, 4, BUDGET).unwrap();
    let mut doc = w.to_doc(&g);
    // collide b_2 with b_1: the b-blocks overlap and verification refuses
    doc.b_seq[2] = doc.b_seq[1].clone();
    assert!(verify_pair_conditions(&g, &doc).is_err());
}

#[test]
fn pair_product_budget_exhaustion() {
    let g = z();
    let err = build_pair_product(&g, 6, 3).unwrap_err();
    assert!(matches!(err, crate::error::Error::Construction { .. }));
}

#[test]
fn pair_product_tail_isolation_is_exhaustive() {
    let g = z();
    let w = build_pair_product(&g, 6, BUDGET).unwrap();
    for m in 1..=3 {
        let (checked, violations) = check_tail_isolation(&g, &w, m).unwrap();
        assert!(checked > 0);
        assert_eq!(violations, Vec::<String>::new(), "m={m}");
    }
}

#[test]
fn pair_product_designated_chain_contains_tail_translates() {
    // {b_j : j >= k} sits in the k-fold intersection of the a-inverse
    // translates, which is what defeats sparseness
    let g = z();
    let w = build_pair_product(&g, 6, BUDGET).unwrap();
    let eval = Evaluator::new(g.clone(), 1 << 22);
    let set = w.set(&g).unwrap();
    for k in 1..=4usize {
        let chain = designated_chain(&g, &w, k);
        for b in w.b_seq.iter().skip(k - 1) {
            for x in &chain {
                // b in x + A, i.e. (-x) + b in A
                let shifted = g.op(&g.inv(x), b);
                assert!(
                    eval.contains(&set, &shifted).unwrap(),
                    "k={k} b={} x={}",
                    g.format(b),
                    g.format(x)
                );
            }
        }
    }
}

#[test]
fn fp_witness_values_and_conditions() {
    let g = z();
    let w = build_fp_small(&g, 5, BUDGET).unwrap();
    assert_eq!(fmt(&g, &w.a_seq), ["-4", "-14", "-44", "-134", "-404"]);
    assert_eq!(fmt(&g, &w.b_seq), ["-2", "-7", "-22", "-67", "-202"]);
    // 2^5 - 1 distinct sums
    let eval = Evaluator::new(g.clone(), 1 << 22);
    let members = eval.members(&w.set(&g).unwrap(), 1 << 20).unwrap();
    assert_eq!(members.len(), 31);
    assert!(w.transcript.iter().all(|i| i.result == "disjoint"));
    verify_fp_conditions(&g, &w.to_doc(&g)).unwrap();

    let mut doc = w.to_doc(&g);
    doc.a_seq[0] = "-3".to_string();
    assert!(verify_fp_conditions(&g, &doc).is_err());
}

#[test]
fn support_partition_census() {
    let g = sum6();
    let p = build_support_partition(&g, 4, 6, 1 << 22).unwrap();
    // every non-identity element of the ball lies in exactly one cell
    assert_eq!(p.ball_size, 1289);
    assert_eq!(p.covered(), 1288);
    assert_eq!(p.cells.len(), 80);
    verify_partition(&g, &p, 1 << 22).unwrap();

    let mut tampered = p.clone();
    tampered.cells[0].1 += 1;
    assert!(verify_partition(&g, &tampered, 1 << 22).is_err());
}

#[test]
fn support_codes_follow_the_zigzag() {
    let g = sum6();
    let x = g.parse("(0,3,0,-1,0,0)").unwrap();
    let codes = cell_code(&g, &x).unwrap().unwrap();
    assert_eq!(codes, vec![5, 2]); // 3 -> 5, -1 -> 2
    assert_eq!(display_code(&codes), vec![2, 5, 2]);
    assert_eq!(cell_code(&g, &g.identity()).unwrap(), None);

    // the smallest cell: support size 1, code 1, one member per coordinate
    let eval = Evaluator::new(g.clone(), 1 << 22);
    let cell = crate::sets::SubsetExpr::SupportCell { codes: vec![1] };
    let members = eval.members(&cell, 4).unwrap();
    assert_eq!(members.len(), 6);
    for m in &members {
        assert_eq!(g.support(m).unwrap().len(), 1);
        assert!(m.raw().contains(&1));
    }
}

#[test]
fn support_cells_partition_the_ball() {
    let g = sum6();
    let p = build_support_partition(&g, 4, 6, 1 << 22).unwrap();
    let eval = Evaluator::new(g.clone(), 1 << 22);
    // membership is decidable per cell without enumerating the others
    let ball = g.ball(4, 1 << 22).unwrap();
    for x in ball.iter() {
        if *x == g.identity() {
            continue;
        }
        let mut hits = 0;
        for (codes, _) in &p.cells {
            if eval.contains(&p.cell_expr(codes), x).unwrap() {
                hits += 1;
            }
        }
        assert_eq!(hits, 1, "x = {}", g.format(x));
    }
}

#[test]
fn support_isolation_scan_is_clean() {
    let g = sum6();
    // disjointly-supported translates enlarge the support, leaving the cell
    for codes in [vec![1], vec![1, 1], vec![5, 2]] {
        let cert = check_support_isolation(&g, &codes, 2, 4, 1 << 22).unwrap();
        let Certificate::IsolationTranscript {
            pairs_checked,
            violations,
            ..
        } = cert
        else {
            panic!("expected an isolation transcript");
        };
        assert!(pairs_checked > 0, "codes={codes:?}");
        assert_eq!(violations, Vec::<String>::new());
    }
}

#[test]
fn congruence_tower_structure() {
    let t = build_congruence_tower(8, 1000).unwrap();
    assert_eq!(t.steps, vec![1; 7]);
    assert_eq!(t.terms.len(), 8);
    assert_eq!(t.value(0).unwrap().to_string(), "1");
    assert_eq!(t.value(1).unwrap().to_string(), "3");
    assert_eq!(t.value(2).unwrap().to_string(), "11");
    assert_eq!(t.value(3).unwrap().to_string(), "2059");
    // a_4 = 2059 + 2^2059: materialized, 2060 bits
    let a4 = t.value(4).unwrap();
    assert_eq!(a4.bits(), 2060);
    // nesting is visible in the residues: a_4 = a_3 = a_2 (mod 2^11)
    let m11 = num_bigint::BigUint::from(2048u32);
    assert_eq!(a4 % &m11, num_bigint::BigUint::from(11u32));
    assert!(matches!(t.terms[5], TowerTerm::Symbolic));
    assert!(matches!(t.terms[7], TowerTerm::Symbolic));
    assert!(t
        .transcript
        .iter()
        .all(|i| i.result == "disjoint" || i.result == "nested"));
    verify_tower(&t).unwrap();
}

#[test]
fn congruence_tower_tamper_detection() {
    let mut t = build_congruence_tower(5, 1000).unwrap();
    t.steps[1] = 2;
    assert!(verify_tower(&t).is_err());

    let mut t2 = build_congruence_tower(5, 1000).unwrap();
    t2.terms[2] = TowerTerm::Value("13".to_string());
    assert!(verify_tower(&t2).is_err());
}

#[test]
fn tower_separation_matches_integer_scan() {
    // independent oracle: brute-scan two arithmetic progressions for a
    // common point; the transcript's criterion must agree
    let t = build_congruence_tower(3, 1000).unwrap();
    let a: Vec<i64> = (0..3)
        .map(|n| t.value(n).unwrap().to_string().parse().unwrap())
        .collect();
    assert_eq!(a, vec![1, 3, 11]);
    let last = a[2];
    let last_mod = 1i64 << last; // 2^11
    for n in 1..=2usize {
        let n_mod = 1i64 << a[n];
        for i in [-1i64, 1] {
            // does (a_n + 2^(a_n) Z) meet (i + a_last + 2^(a_last) Z)?
            let mut hit = false;
            let mut x = a[n] % n_mod;
            // scan within a window several periods long
            while x < 200_000 {
                if (x - (i + last)).rem_euclid(last_mod) == 0 {
                    hit = true;
                    break;
                }
                x += n_mod;
            }
            assert!(!hit, "n={n} i={i}");
        }
    }
    // sanity: the same scan does find the intersection point for i = 0
    let mut found = false;
    let mut x = a[1] % (1i64 << a[1]);
    while x < 200_000 {
        if (x - last).rem_euclid(last_mod) == 0 {
            found = true;
            break;
        }
        x += 1i64 << a[1];
    }
    assert!(found, "nested classes share their deepest class");
}

#[test]
fn tower_needs_at_least_two_terms() {
    assert!(build_congruence_tower(1, 10).is_err());
}
