//! Randomized check of the variable-basis algebra laws.
//!
//! Each trial draws a universe of 1 to 16 labels, three vectors on random
//! sub-bases and two scalars, then evaluates every law once. Bases are
//! biased towards the empty and full basis so the neutral-element and
//! inverse statements are exercised on both sides.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{BasisSet, Label, Universe, VBVector, DEFAULT_COORD_TOL};

pub const MAX_UNIVERSE: u32 = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct LawResult {
    pub name: &'static str,
    pub cases: usize,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfCheckReport {
    pub trials: usize,
    pub seed: u64,
    pub laws: Vec<LawResult>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.failure.is_none())
    }
}

impl fmt::Display for SelfCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "selfcheck trials={} seed={}", self.trials, self.seed)?;
        for law in &self.laws {
            match &law.failure {
                None => writeln!(f, "PASS {} ({} cases)", law.name, law.cases)?,
                Some(cx) => writeln!(f, "FAIL {} ({} cases): {cx}", law.name, law.cases)?,
            }
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "all laws hold"
            } else {
                "law violations found"
            }
        )
    }
}

struct Case {
    universe: Universe,
    x: VBVector,
    y: VBVector,
    z: VBVector,
    a: f64,
    b: f64,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "|U|={} x={} y={} z={} a={} b={}",
            self.universe.len(),
            self.x,
            self.y,
            self.z,
            self.a,
            self.b
        )
    }
}

fn random_vector<R: Rng>(rng: &mut R, n: u32) -> VBVector {
    let basis: BasisSet = match rng.gen_range(0..10) {
        0 => BasisSet::empty(),
        1 => (1..=n).map(Label).collect(),
        _ => (1..=n).filter(|_| rng.gen_bool(0.5)).map(Label).collect(),
    };
    VBVector::from_pairs(basis.iter().map(|l| (l, rng.gen_range(-10.0..10.0))))
}

fn draw<R: Rng>(rng: &mut R) -> Case {
    let n = rng.gen_range(1..=MAX_UNIVERSE);
    let x = random_vector(rng, n);
    let y = match rng.gen_range(0..6) {
        // exact negation, so inverse statements see their boundary case
        0 => x.scale(-1.0),
        _ => random_vector(rng, n),
    };
    Case {
        universe: Universe::range(n),
        z: random_vector(rng, n),
        x,
        y,
        a: rng.gen_range(-5.0..5.0),
        b: rng.gen_range(-5.0..5.0),
    }
}

type Law = (&'static str, fn(&Case) -> bool);

fn close(p: &VBVector, q: &VBVector) -> bool {
    p.approx_eq(q, DEFAULT_COORD_TOL)
}

const LAWS: &[Law] = &[
    ("union commutativity", |c| {
        c.x.union_add(&c.y) == c.y.union_add(&c.x)
    }),
    ("intersection commutativity", |c| {
        c.x.inter_add(&c.y) == c.y.inter_add(&c.x)
    }),
    ("union associativity", |c| {
        close(
            &c.x.union_add(&c.y).union_add(&c.z),
            &c.x.union_add(&c.y.union_add(&c.z)),
        )
    }),
    ("intersection associativity", |c| {
        close(
            &c.x.inter_add(&c.y).inter_add(&c.z),
            &c.x.inter_add(&c.y.inter_add(&c.z)),
        )
    }),
    ("union neutral element is the empty-basis zero", |c| {
        let zero = VBVector::zero_empty();
        c.x.union_add(&zero) == c.x && zero.union_add(&c.x) == c.x
    }),
    ("intersection neutral element is the full-basis zero", |c| {
        let zero = c.universe.zero_full();
        c.x.inter_add(&zero) == c.x && zero.inter_add(&c.x) == c.x
    }),
    ("only the empty-basis zero is union-invertible", |c| {
        let zero = VBVector::zero_empty();
        let pair_ok = c.x.union_add(&c.y) != zero || (c.x.is_empty() && c.y.is_empty());
        let negation_ok = (c.x.union_add(&c.x.scale(-1.0)) == zero) == c.x.is_empty();
        pair_ok && negation_ok
    }),
    ("only full-basis vectors are intersection-invertible", |c| {
        let zero = c.universe.zero_full();
        let full = c.universe.full_basis();
        let pair_ok = !close(&c.x.inter_add(&c.y), &zero)
            || (c.x.has_basis(full) && c.y.has_basis(full) && close(&c.y, &c.x.scale(-1.0)));
        let negation_ok = close(&c.x.inter_add(&c.x.scale(-1.0)), &zero) == c.x.has_basis(full);
        pair_ok && negation_ok
    }),
    ("scaling distributes over union", |c| {
        close(
            &c.x.union_add(&c.y).scale(c.a),
            &c.x.scale(c.a).union_add(&c.y.scale(c.a)),
        )
    }),
    ("scaling distributes over intersection", |c| {
        close(
            &c.x.inter_add(&c.y).scale(c.a),
            &c.x.scale(c.a).inter_add(&c.y.scale(c.a)),
        )
    }),
    ("scalar sum distributes under both laws", |c| {
        let lhs = c.x.scale(c.a + c.b);
        close(&lhs, &c.x.scale(c.a).union_add(&c.x.scale(c.b)))
            && close(&lhs, &c.x.scale(c.a).inter_add(&c.x.scale(c.b)))
    }),
    ("scalar product associates", |c| {
        close(&c.x.scale(c.a * c.b), &c.x.scale(c.b).scale(c.a))
    }),
    ("unit scalar is neutral", |c| c.x.scale(1.0) == c.x),
    ("result basis depends only on operand bases", |c| {
        let (bx, by) = (c.x.basis(), c.y.basis());
        let shifted = c.y.scale(c.a).union_add(&c.y.unit_from());
        c.x.union_add(&c.y).basis() == bx.union(&by)
            && c.x.inter_add(&c.y).basis() == bx.intersection(&by)
            && c.x.union_add(&shifted).basis() == c.x.union_add(&c.y).basis()
            && c.x.scale(0.0).basis() == bx
    }),
];

/// Runs `trials` random cases through every law with a seeded generator.
pub fn run_selfcheck(trials: usize, seed: u64) -> SelfCheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut laws: Vec<LawResult> = LAWS
        .iter()
        .map(|(name, _)| LawResult {
            name,
            cases: 0,
            failure: None,
        })
        .collect();
    for _ in 0..trials {
        let case = draw(&mut rng);
        for (result, (_, law)) in laws.iter_mut().zip(LAWS) {
            result.cases += 1;
            if result.failure.is_none() && !law(&case) {
                result.failure = Some(case.to_string());
            }
        }
    }
    SelfCheckReport { trials, seed, laws }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_runs_are_reproducible() {
        let a = run_selfcheck(200, 42);
        let b = run_selfcheck(200, 42);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
        assert!(a.passed(), "{a}");
    }

    #[test]
    fn a_broken_law_is_reported() {
        // Feed a deliberately wrong law through the same machinery.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let bogus: fn(&Case) -> bool = |c| c.x.inter_add(&c.y) == c.x.union_add(&c.y);
        let found = (0..100).map(|_| draw(&mut rng)).any(|c| !bogus(&c));
        assert!(found);
    }
}
