use rand::Rng;
use serde::Serialize;

use crate::alphabet::{OperatingPoint, SignalAlphabet};
use crate::error::Result;

/// Which of the two alphabet states was sent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Minus => -1.0,
            Sign::Plus => 1.0,
        }
    }
}

/// Verdict of a three-outcome measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Decision {
    GuessMinus,
    GuessPlus,
    Inconclusive,
}

impl Decision {
    pub fn is_conclusive(self) -> bool {
        self != Decision::Inconclusive
    }

    pub fn is_wrong_for(self, sent: Sign) -> bool {
        matches!(
            (self, sent),
            (Decision::GuessPlus, Sign::Minus) | (Decision::GuessMinus, Sign::Plus)
        )
    }
}

/// Outcome probabilities for one sent state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerdictProbabilities {
    pub guess_minus: f64,
    pub guess_plus: f64,
    pub inconclusive: f64,
}

impl VerdictProbabilities {
    pub fn wrong_for(&self, sent: Sign) -> f64 {
        match sent {
            Sign::Minus => self.guess_plus,
            Sign::Plus => self.guess_minus,
        }
    }

    pub fn accepted(&self) -> f64 {
        self.guess_minus + self.guess_plus
    }
}

/// Draws raw measurement outcomes for a prepared receiver.
pub trait OutcomeSampler: Send + Sync {
    type Outcome: Copy;

    fn sample<R: Rng + ?Sized>(&self, sent: Sign, rng: &mut R) -> Self::Outcome;
}

/// A probabilistic receiver: closed-form verdict statistics, a decision
/// rule over raw outcomes and a sampler of those outcomes.
pub trait Receiver {
    type Outcome: Copy;
    type Sampler: OutcomeSampler<Outcome = Self::Outcome>;

    fn verdict_probabilities(&self, alphabet: &SignalAlphabet, sent: Sign) -> VerdictProbabilities;

    fn decide(&self, outcome: Self::Outcome) -> Decision;

    fn sampler(&self, alphabet: &SignalAlphabet) -> Result<Self::Sampler>;

    /// Prior-weighted error rate (conditioned on acceptance) and
    /// inconclusive rate.
    fn operating_point(&self, alphabet: &SignalAlphabet) -> Result<OperatingPoint> {
        let minus = self.verdict_probabilities(alphabet, Sign::Minus);
        let plus = self.verdict_probabilities(alphabet, Sign::Plus);
        let wrong = alphabet.p1() * minus.wrong_for(Sign::Minus)
            + alphabet.p2() * plus.wrong_for(Sign::Plus);
        let accepted = alphabet.p1() * minus.accepted() + alphabet.p2() * plus.accepted();
        OperatingPoint::from_weighted(wrong, accepted)
    }
}
