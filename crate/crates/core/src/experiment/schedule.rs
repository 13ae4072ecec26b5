use serde::{Deserialize, Serialize};

use crate::cooling::Permutation;
use crate::{Error, Result};

/// One protocol step. Qubit indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Step {
    Refresh(usize),
    Swap(usize, usize),
    /// Three-bit compression, cooled qubit first.
    Compress(usize, usize, usize),
    /// Arbitrary basis permutation, `map[old] = new`.
    Permutation(Vec<usize>),
}

impl Step {
    pub fn is_refresh(&self) -> bool {
        matches!(self, Step::Refresh(_))
    }

    /// The register permutation of a gate step, `None` for a refresh.
    pub fn permutation(&self, n: usize) -> Result<Option<Permutation>> {
        Ok(match self {
            Step::Refresh(_) => None,
            Step::Swap(i, j) => Some(Permutation::swap_gate(*i, *j, n)?),
            Step::Compress(i, j, k) => Some(Permutation::three_bit_compression(n, (*i, *j, *k))?),
            Step::Permutation(map) => {
                if map.len() != 1 << n {
                    return Err(Error::SizeMismatch {
                        expected: 1 << n,
                        got: map.len(),
                    });
                }
                Some(Permutation::new(map.clone())?)
            }
        })
    }

    fn describe(&self, labels: &[String]) -> String {
        let l = |q: &usize| labels[q - 1].clone();
        match self {
            Step::Refresh(q) => format!("refresh({})", l(q)),
            Step::Swap(i, j) => format!("swap({},{})", l(i), l(j)),
            Step::Compress(i, j, k) => format!("3bc({};{},{})", l(i), l(j), l(k)),
            Step::Permutation(_) => "permutation".to_string(),
        }
    }
}

/// Ordered refresh and gate steps on an `n`-qubit register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSchedule", into = "RawSchedule")]
pub struct ProtocolSchedule {
    labels: Vec<String>,
    steps: Vec<Step>,
    gates: Vec<Option<Permutation>>,
}

#[derive(Serialize, Deserialize)]
struct RawSchedule {
    qubits: Vec<String>,
    steps: Vec<Step>,
}

impl TryFrom<RawSchedule> for ProtocolSchedule {
    type Error = Error;

    fn try_from(raw: RawSchedule) -> Result<Self> {
        Self::new(raw.qubits, raw.steps)
    }
}

impl From<ProtocolSchedule> for RawSchedule {
    fn from(s: ProtocolSchedule) -> Self {
        RawSchedule {
            qubits: s.labels,
            steps: s.steps,
        }
    }
}

impl ProtocolSchedule {
    pub fn new(labels: Vec<String>, steps: Vec<Step>) -> Result<Self> {
        let n = labels.len();
        if n == 0 || n > 16 {
            return Err(Error::InvalidSchedule(format!("{n} qubits")));
        }
        if steps.is_empty() {
            return Err(Error::InvalidSchedule("no steps".into()));
        }
        let mut gates = Vec::with_capacity(steps.len());
        for step in &steps {
            if let Step::Refresh(q) = step {
                if *q == 0 || *q > n {
                    return Err(Error::QubitOutOfRange { index: *q, n });
                }
            }
            gates.push(step.permutation(n)?);
        }
        Ok(Self {
            labels,
            steps,
            gates,
        })
    }

    /// The first six PPA operations on (C1, C2, Cm), with Cm the reset qubit.
    pub fn six_step() -> Self {
        let labels = ["C1", "C2", "Cm"].map(String::from).to_vec();
        let steps = vec![
            Step::Refresh(3),
            Step::Swap(3, 2),
            Step::Refresh(3),
            Step::Swap(3, 1),
            Step::Refresh(3),
            Step::Compress(1, 2, 3),
        ];
        Self::new(labels, steps).expect("six-step schedule is valid")
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub(crate) fn gate(&self, index: usize) -> Option<&Permutation> {
        self.gates[index].as_ref()
    }

    pub fn describe(&self, index: usize) -> String {
        self.steps[index].describe(&self.labels)
    }
}
