//! Synthesis instances: a formula plus an input/output partition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Formula, PropId};
use crate::store::{FoldMode, Store};
use crate::trace::{assignments, Letter};

/// Who moves first in each round.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemType {
    /// The system commits its outputs before seeing the inputs.
    #[default]
    Moore,
    /// The environment commits its inputs first.
    Mealy,
}

impl fmt::Display for SystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemType::Moore => "moore",
            SystemType::Mealy => "mealy",
        })
    }
}

impl FromStr for SystemType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "moore" => Ok(SystemType::Moore),
            "mealy" => Ok(SystemType::Mealy),
            other => Err(Error::Partition(format!("unknown system type `{other}`"))),
        }
    }
}

/// Input and output proposition names; order fixes the letter bit order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Partition {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl Partition {
    pub fn new<S: Into<String>>(
        inputs: impl IntoIterator<Item = S>,
        outputs: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let p = Partition {
            inputs: inputs.into_iter().map(Into::into).collect(),
            outputs: outputs.into_iter().map(Into::into).collect(),
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if self.inputs.is_empty() && self.outputs.is_empty() {
            return Err(Error::Partition("no inputs and no outputs".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for name in self.inputs.iter().chain(&self.outputs) {
            if !seen.insert(name) {
                return Err(Error::Partition(format!("`{name}` is declared twice")));
            }
        }
        Ok(())
    }

    /// Parses the two-line `.inputs:` / `.outputs:` format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut inputs = None;
        let mut outputs = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (slot, rest) = if let Some(rest) = line.strip_prefix(".inputs:") {
                (&mut inputs, rest)
            } else if let Some(rest) = line.strip_prefix(".outputs:") {
                (&mut outputs, rest)
            } else {
                return Err(Error::Partition(format!("unexpected line `{line}`")));
            };
            if slot.is_some() {
                return Err(Error::Partition(format!("duplicate line `{line}`")));
            }
            *slot = Some(rest.split_whitespace().map(String::from).collect::<Vec<_>>());
        }
        let (Some(inputs), Some(outputs)) = (inputs, outputs) else {
            return Err(Error::Partition(
                "expected both `.inputs:` and `.outputs:` lines".into(),
            ));
        };
        Partition::new(inputs, outputs)
    }

    pub fn render(&self) -> String {
        format!(
            ".inputs: {}\n.outputs: {}\n",
            self.inputs.join(" "),
            self.outputs.join(" ")
        )
    }
}

/// A loaded synthesis problem. Inputs occupy the low letter bits, outputs the
/// bits right above them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecInstance {
    pub formula: Formula,
    pub inputs: Vec<PropId>,
    pub outputs: Vec<PropId>,
    pub system_type: SystemType,
}

impl SpecInstance {
    /// Builds a fresh store over the partition and parses `formula` into it.
    /// Propositions missing from the partition are rejected.
    pub fn load(
        fold: FoldMode,
        formula: &str,
        partition: &Partition,
        system_type: SystemType,
    ) -> Result<(Store, SpecInstance)> {
        partition.validate()?;
        let mut store = Store::new(fold);
        let inputs = partition
            .inputs
            .iter()
            .map(|n| store.formulas.declare(n))
            .collect::<Result<Vec<_>>>()?;
        let outputs = partition
            .outputs
            .iter()
            .map(|n| store.formulas.declare(n))
            .collect::<Result<Vec<_>>>()?;
        let formula = store.parse_declared(formula)?;
        store.register_atoms(formula);
        Ok((
            store,
            SpecInstance {
                formula,
                inputs,
                outputs,
                system_type,
            },
        ))
    }

    pub fn input_mask(&self) -> u64 {
        self.inputs.iter().fold(0, |m, &p| m | 1 << p)
    }

    pub fn output_mask(&self) -> u64 {
        self.outputs.iter().fold(0, |m, &p| m | 1 << p)
    }

    /// Input assignments in ascending order.
    pub fn input_letters(&self) -> Vec<Letter> {
        assignments(self.input_mask()).collect()
    }

    /// Output assignments in ascending order.
    pub fn output_letters(&self) -> Vec<Letter> {
        assignments(self.output_mask()).collect()
    }
}
