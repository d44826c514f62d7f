//! The seeded rule instances over a bounded universe of pairs.

use super::{Fact, Pair, Provenance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedOptions {
    /// Pairs `(n, m)` with `2 <= m <= n <= universe` are instantiated.
    pub universe: usize,
    /// `LE((m,2),(k,3))` for `k >= 2m - 1`, a published result with no
    /// witness in this crate.
    pub laflamme: bool,
    /// `(3,2) = (9,5) = (12,5)`, published without proof details.
    pub equal_axiom: bool,
}

impl Default for SeedOptions {
    fn default() -> Self {
        SeedOptions {
            universe: 12,
            laflamme: true,
            equal_axiom: true,
        }
    }
}

/// All valid pairs of the universe, ordered by `n` then `m`.
pub fn universe_pairs(universe: usize) -> Vec<Pair> {
    (2..=universe)
        .flat_map(|n| (2..=n).map(move |m| Pair::new(n, m)))
        .collect()
}

/// Instances of the monotonicity rules, the optional axioms and the
/// pigeonhole bridge facts (`rhs.m = 2`, where `P` is decided by counting).
pub fn seed_facts(options: SeedOptions) -> Vec<Fact> {
    let pairs = universe_pairs(options.universe);
    let inside = |p: Pair| p.is_valid() && p.n <= options.universe;
    let bottom = Pair::new(2, 2);
    let mut facts = Vec::new();

    for &p in &pairs {
        // meeting fewer pieces is easier
        let fewer = Pair::new(p.n, p.m + 1);
        if inside(fewer) {
            facts.push(Fact::le(
                fewer,
                p,
                Provenance::Lemma,
                "more meets: r(n,m+1) <= r(n,m)",
            ));
        }
        let wider = Pair::new(p.n + 1, p.m);
        if inside(wider) {
            facts.push(Fact::le(
                p,
                wider,
                Provenance::Lemma,
                "more pieces: r(n,m) <= r(n+1,m)",
            ));
        }
    }

    // block rule: (i,j) <= (m,n) when m <= i <= mk and j > (n-1)k for some k
    for &a in &pairs {
        for &b in &pairs {
            if a == b {
                continue;
            }
            if let Some(k) =
                (1..=a.n).find(|&k| b.n <= a.n && a.n <= b.n * k && a.m > (b.m - 1) * k)
            {
                facts.push(Fact::le(
                    a,
                    b,
                    Provenance::Lemma,
                    format!(
                        "blocks of {k}: {} <= {}*{k} and {} > {}*{k}",
                        a.n,
                        b.n,
                        a.m,
                        b.m - 1
                    ),
                ));
            }
        }
    }

    for &p in &pairs {
        if p != bottom {
            facts.push(Fact::le(bottom, p, Provenance::Lemma, "(2,2) is least"));
        }
    }

    for &p in &pairs {
        if p != bottom && p.n <= 2 * (p.m - 1) {
            facts.push(Fact::le(
                p,
                bottom,
                Provenance::Lemma,
                format!("collapse: {} <= 2*({}-1)", p.n, p.m),
            ));
        }
    }

    if options.laflamme {
        for m in 2..=options.universe {
            for k in (2 * m - 1)..=options.universe {
                let (a, b) = (Pair::new(m, 2), Pair::new(k, 3));
                if inside(a) && inside(b) {
                    facts.push(Fact::le(
                        a,
                        b,
                        Provenance::Axiom,
                        format!("Laflamme: P({m},{k},2,2) fails since {k} >= 2*{m}-1"),
                    ));
                }
            }
        }
    }

    if options.equal_axiom {
        let base = Pair::new(3, 2);
        for other in [Pair::new(9, 5), Pair::new(12, 5)] {
            if inside(other) {
                let cite = "published equality r(3,2) = r(9,5) = r(12,5)";
                facts.push(Fact::le(base, other, Provenance::Axiom, cite));
                facts.push(Fact::le(other, base, Provenance::Axiom, cite));
            }
        }
    }

    // rhs.m = 2: P(i, j, k, 1) fails iff i <= j(k-1)
    for &lhs in &pairs {
        for j in 2..=options.universe {
            let rhs = Pair::new(j, 2);
            if lhs == rhs {
                continue;
            }
            let bound = j * (lhs.m - 1);
            let instance = format!("P({},{j},{},1)", lhs.n, lhs.m);
            facts.push(if lhs.n <= bound {
                Fact::le(
                    lhs,
                    rhs,
                    Provenance::Arithmetic,
                    format!("{instance} fails: {} <= {bound}", lhs.n),
                )
            } else {
                Fact::nle(
                    lhs,
                    rhs,
                    Provenance::Arithmetic,
                    format!("{instance} holds: {} > {bound}", lhs.n),
                )
            });
        }
    }
    facts
}
