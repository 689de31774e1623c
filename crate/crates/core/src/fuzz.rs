//! Seeded random multi-utility instances on small simplexes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axioms::Universe;
use crate::rational::Rational;
use crate::relations::{ComparisonOutcome, Model, RelationModel};
use crate::spaces::{MixtureSpace, Point};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// One non-constant utility.
    SingleUtility,
    /// Two utilities with distinct entries whose dominance on the vertices is
    /// incomplete but not empty.
    Pareto,
    /// One to three utilities with small entries.
    Multi,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub label: String,
    pub family: Family,
    pub model: Model,
    pub universe: Universe,
}

pub struct Generator {
    rng: ChaCha8Rng,
    serial: usize,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator { rng: ChaCha8Rng::seed_from_u64(seed), serial: 0 }
    }

    fn dim(&mut self) -> usize {
        if self.rng.gen_bool(0.5) {
            2
        } else {
            3
        }
    }

    fn utility(&mut self, n: usize, span: i128) -> Vec<Rational> {
        (0..n).map(|_| Rational::integer(self.rng.gen_range(-span..=span))).collect()
    }

    fn distinct_utility(&mut self, n: usize) -> Vec<Rational> {
        let mut pool: Vec<i128> = (-4..=4).collect();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let k = self.rng.gen_range(0..pool.len());
            out.push(Rational::integer(pool.swap_remove(k)));
        }
        out
    }

    fn finish(&mut self, family: Family, dim: usize, utilities: Vec<Vec<Rational>>) -> Instance {
        self.serial += 1;
        let label = format!("{family:?}#{} on simplex({dim}) {}", self.serial, show(&utilities));
        let model = Model::new(MixtureSpace::simplex(dim), RelationModel::MultiUtility { utilities }).expect("valid utilities");
        let universe = Universe::new((0..=dim).map(|i| Point::vertex(dim + 1, i)).collect());
        Instance { label, family, model, universe }
    }

    pub fn single_utility(&mut self) -> Instance {
        let dim = self.dim();
        loop {
            let u = self.utility(dim + 1, 3);
            if u.iter().any(|v| *v != u[0]) {
                return self.finish(Family::SingleUtility, dim, vec![u]);
            }
        }
    }

    pub fn pareto(&mut self) -> Instance {
        let dim = self.dim();
        loop {
            let us = vec![self.distinct_utility(dim + 1), self.distinct_utility(dim + 1)];
            let inst = self.finish(Family::Pareto, dim, us);
            if vertices_incomparable(&inst) && vertices_ordered(&inst) {
                return inst;
            }
            self.serial -= 1;
        }
    }

    pub fn multi(&mut self) -> Instance {
        let dim = self.dim();
        let k = self.rng.gen_range(1..=3);
        let us = (0..k).map(|_| self.utility(dim + 1, 2)).collect();
        self.finish(Family::Multi, dim, us)
    }

    /// A mixed corpus in a fixed rotation of the three families.
    pub fn corpus(&mut self, count: usize) -> Vec<Instance> {
        (0..count)
            .map(|i| match i % 3 {
                0 => self.multi(),
                1 => self.pareto(),
                _ => self.single_utility(),
            })
            .collect()
    }
}

fn vertices_incomparable(inst: &Instance) -> bool {
    let pts = &inst.universe.points;
    pts.iter().any(|x| pts.iter().any(|y| inst.model.compare(x, y).ok() == Some(ComparisonOutcome::Incomparable)))
}

fn vertices_ordered(inst: &Instance) -> bool {
    let pts = &inst.universe.points;
    pts.iter().any(|x| pts.iter().any(|y| inst.model.compare(x, y).ok() == Some(ComparisonOutcome::Better)))
}

fn show(us: &[Vec<Rational>]) -> String {
    let parts: Vec<String> = us.iter().map(|u| format!("({})", u.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))).collect();
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_corpus() {
        let a: Vec<String> = Generator::new(7).corpus(12).into_iter().map(|i| i.label).collect();
        let b: Vec<String> = Generator::new(7).corpus(12).into_iter().map(|i| i.label).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn pareto_instances_are_incomplete_and_nontrivial() {
        let mut g = Generator::new(1);
        for _ in 0..20 {
            let inst = g.pareto();
            assert!(vertices_incomparable(&inst) && vertices_ordered(&inst));
        }
    }
}
