use reap_core::kb::{
    self, close_kb, open_problems, Answer, KnowledgeBase, OrderConfig, Pair, Provenance,
    SeedOptions,
};
use reap_core::{DecideOptions, Verdict};

fn p(n: usize, m: usize) -> Pair {
    Pair::new(n, m)
}

fn with_fixtures() -> KnowledgeBase {
    let mut kb = KnowledgeBase::new();
    kb::load_fixtures(&mut kb);
    kb
}

#[test]
fn equivalence_classes() {
    let closure = close_kb(
        &with_fixtures(),
        SeedOptions {
            universe: 9,
            ..Default::default()
        },
        &[],
    )
    .unwrap();
    let three = closure.class_of(p(3, 2));
    for q in [p(5, 3), p(6, 3), p(7, 4), p(8, 4)] {
        assert!(three.contains(&q), "{q} not with (3,2)");
    }
    let four = closure.class_of(p(4, 2));
    assert!(four.contains(&p(7, 3)) && four.contains(&p(8, 3)));
    let bottom = closure.class_of(p(2, 2));
    for n in 2..=9 {
        for m in 2..=n {
            assert_eq!(bottom.contains(&p(n, m)), n <= 2 * (m - 1), "({n},{m})");
        }
    }
}

#[test]
fn block_rule_fact_without_converse() {
    let bare = SeedOptions {
        universe: 12,
        laflamme: true,
        equal_axiom: false,
    };
    let closure = close_kb(&KnowledgeBase::new(), bare, &[]).unwrap();
    assert!(closure.le(p(9, 4), p(3, 2)));
    assert!(!closure.le(p(3, 2), p(9, 4)));
    assert!(!closure.nle(p(3, 2), p(9, 4)));

    // either the equality axiom or the stored P(3,9,2,3) coloring settles it
    let closure = close_kb(&KnowledgeBase::new(), SeedOptions::default(), &[]).unwrap();
    assert!(closure.le(p(3, 2), p(9, 4)));
    let closure = close_kb(&with_fixtures(), bare, &[]).unwrap();
    let proof = closure.le_proof(p(3, 2), p(9, 4)).unwrap();
    assert!(proof
        .steps
        .iter()
        .any(|f| f.provenance == Provenance::SearchCert));
}

#[test]
fn laflamme_dependence_is_reported() {
    let mut kb = with_fixtures();
    let cells = kb::table(&mut kb, 9, &OrderConfig::default(), false).unwrap();
    let dependent: Vec<(usize, usize)> = cells
        .iter()
        .filter(|c| c.laflamme_dependent)
        .map(|c| (c.row, c.col))
        .collect();
    assert!(dependent.contains(&(7, 3)));
    assert!(dependent.contains(&(8, 3)));
    assert!(!dependent.contains(&(5, 3)));
}

#[test]
fn consistency_under_every_toggle() {
    for laflamme in [false, true] {
        for equal_axiom in [false, true] {
            let seed = SeedOptions {
                universe: 12,
                laflamme,
                equal_axiom,
            };
            close_kb(&with_fixtures(), seed, &[]).unwrap();
        }
    }
}

#[test]
fn open_problem_readings() {
    let mut kb = with_fixtures();
    let config = OrderConfig {
        decide: DecideOptions {
            max_depth: 2,
            budget: 20_000,
            parallelism: 1,
        },
        ..Default::default()
    };
    let targets = open_problems(&mut kb, &config).unwrap();
    let find = |reading: &str| {
        targets
            .iter()
            .find(|t| t.reading.starts_with(reading))
            .unwrap()
    };
    let a = find("A:");
    assert_eq!(a.query.unwrap().to_string(), "P(11,3,6,1)");
    assert!(a.verdict.as_ref().unwrap().is_fails());
    assert_eq!(a.kb_answer, Answer::Le);
    let b = find("B:");
    assert_eq!(b.query.unwrap().to_string(), "P(3,11,2,5)");
    assert!(matches!(b.verdict, Some(Verdict::Unknown { .. })));
    assert_eq!(
        find("(3,2) <= (9,4)").query.unwrap().to_string(),
        "P(3,9,2,3)"
    );
    assert!(!kb.searches.is_empty());
    assert!(kb.audit().is_empty());
}
