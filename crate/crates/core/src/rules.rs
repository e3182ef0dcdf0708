//! Finitely described maps `(s, y) -> value` for `s >= 1`, `y >= 0`.
//!
//! A *row* lists the values for `s = 1, 2, ...`; rows shorter than the digit
//! range repeat cyclically, so every rule is total.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RowRule<T> {
    /// The same row at every level `y`.
    Constant { values: Vec<T> },
    /// Row `rows[y mod len]`.
    PeriodicY { rows: Vec<Vec<T>> },
    /// Row `rows[y]` while in range, then `default`.
    Table { rows: Vec<Vec<T>>, default: Vec<T> },
}

impl<T> RowRule<T> {
    pub fn row(&self, y: usize) -> &[T] {
        match self {
            RowRule::Constant { values } => values,
            RowRule::PeriodicY { rows } => &rows[y % rows.len()],
            RowRule::Table { rows, default } => rows.get(y).map(Vec::as_slice).unwrap_or(default),
        }
    }

    /// Value for digit `s >= 1` at level `y`.
    pub fn value(&self, s: u64, y: usize) -> &T {
        assert!(s >= 1, "digit values start at s = 1");
        let row = self.row(y);
        &row[((s - 1) % row.len() as u64) as usize]
    }

    pub fn validate(&self) -> Result<()> {
        let empty = |what: &str| Err(Error::InvalidSpec(format!("{what} must not be empty")));
        match self {
            RowRule::Constant { values } if values.is_empty() => empty("constant row"),
            RowRule::PeriodicY { rows } if rows.is_empty() => empty("periodic rows"),
            RowRule::PeriodicY { rows } | RowRule::Table { rows, .. } if rows.iter().any(Vec::is_empty) => {
                empty("every row")
            }
            RowRule::Table { default, .. } if default.is_empty() => empty("default row"),
            _ => Ok(()),
        }
    }

    /// `(start, period)` such that rows are periodic in `y` from `start` on.
    pub fn eventual_period(&self) -> (usize, usize) {
        match self {
            RowRule::Constant { .. } => (0, 1),
            RowRule::PeriodicY { rows } => (0, rows.len()),
            RowRule::Table { rows, .. } => (rows.len(), 1),
        }
    }

    /// Every value that appears anywhere in the rule.
    pub fn all_values(&self) -> Vec<&T> {
        match self {
            RowRule::Constant { values } => values.iter().collect(),
            RowRule::PeriodicY { rows } => rows.iter().flatten().collect(),
            RowRule::Table { rows, default } => rows.iter().flatten().chain(default.iter()).collect(),
        }
    }

    pub fn try_map<U, F>(&self, mut f: F) -> Result<RowRule<U>>
    where
        F: FnMut(&T) -> Result<U>,
    {
        let mut map_row = |row: &Vec<T>| row.iter().map(&mut f).collect::<Result<Vec<U>>>();
        Ok(match self {
            RowRule::Constant { values } => RowRule::Constant { values: map_row(values)? },
            RowRule::PeriodicY { rows } => {
                RowRule::PeriodicY { rows: rows.iter().map(&mut map_row).collect::<Result<_>>()? }
            }
            RowRule::Table { rows, default } => RowRule::Table {
                rows: rows.iter().map(&mut map_row).collect::<Result<_>>()?,
                default: map_row(default)?,
            },
        })
    }

    pub fn map<U, F>(&self, mut f: F) -> RowRule<U>
    where
        F: FnMut(&T) -> U,
    {
        self.try_map(|v| Ok(f(v))).expect("infallible")
    }
}

/// Combined eventual period of two periodic-from-some-point sequences.
pub fn joint_period(a: (usize, usize), b: (usize, usize)) -> (usize, usize) {
    (a.0.max(b.0), num_integer::lcm(a.1, b.1))
}
