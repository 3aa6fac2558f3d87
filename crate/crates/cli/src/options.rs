use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use nborient_core::sphere::SphereBudget;
use nborient_core::{DeltaComplex, Ring};

use crate::error::{CliError, Result};

pub const DEFAULT_MAX_CELLS: usize = 1_000_000;

/// Largest total cell count a command will work on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Budget {
    Cells(usize),
    Unlimited,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::Cells(DEFAULT_MAX_CELLS)
    }
}

impl FromStr for Budget {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "unlimited" {
            return Ok(Budget::Unlimited);
        }
        s.parse().map(Budget::Cells).map_err(|_| format!("budget must be a cell count or `unlimited`, got {s:?}"))
    }
}

impl fmt::Display for Budget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Budget::Cells(n) => write!(f, "{n}"),
            Budget::Unlimited => write!(f, "unlimited"),
        }
    }
}

impl Budget {
    pub fn admit(&self, x: &DeltaComplex) -> Result<()> {
        let cells: usize = x.f_vector().iter().sum();
        match self {
            Budget::Cells(max) if cells > *max => {
                Err(CliError::Budget(format!("{cells} cells exceed the budget of {max}")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub ring: Option<Ring>,
    pub field: Option<Ring>,
    pub seed: u64,
    pub budget: Budget,
    pub flip_rounds: usize,
    /// The constant `C(n)` of the filling-radius bound.
    pub constant: Option<f64>,
    pub corpus: Option<String>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            ring: None,
            field: None,
            seed: 0,
            budget: Budget::default(),
            flip_rounds: SphereBudget::default().flip_rounds,
            constant: None,
            corpus: None,
        }
    }
}

impl RunOptions {
    pub fn sphere_budget(&self) -> SphereBudget {
        SphereBudget {
            flip_rounds: self.flip_rounds,
            seed: SphereBudget::default().seed ^ self.seed,
        }
    }

    pub fn to_map(&self) -> BTreeMap<String, Value> {
        let mut m = BTreeMap::new();
        m.insert("ring".into(), json!(self.ring.map(|r| r.to_string())));
        m.insert("field".into(), json!(self.field.map(|r| r.to_string())));
        m.insert("seed".into(), json!(self.seed));
        m.insert("budget".into(), json!(self.budget.to_string()));
        m.insert("flip_rounds".into(), json!(self.flip_rounds));
        m.insert("c_n".into(), json!(self.constant));
        m.insert("corpus".into(), json!(self.corpus));
        m
    }
}
