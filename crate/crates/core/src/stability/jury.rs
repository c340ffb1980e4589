use std::fmt;

use crate::error::{Error, Result};

/// One of the Jury conditions, in evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JuryCondition {
    /// `H(1) > 0`.
    AtOne,
    /// `(-1)^n H(-1) > 0`.
    AtMinusOne,
    /// `|a_0| < a_n`.
    Constant,
    /// `|first| > |last|` of the `j`-th derived table row (1-based: `b` is 1).
    TableRow(usize),
}

impl fmt::Display for JuryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JuryCondition::AtOne => f.write_str("H(1) > 0"),
            JuryCondition::AtMinusOne => f.write_str("(-1)^n H(-1) > 0"),
            JuryCondition::Constant => f.write_str("|a0| < an"),
            JuryCondition::TableRow(j) => write!(f, "table row {j}: |first| > |last|"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JuryVerdict {
    pub stable: bool,
    /// Derived rows `b, c, ...` down to length 3.
    pub table_rows: Vec<Vec<f64>>,
    /// First violated condition.
    pub failed_condition: Option<JuryCondition>,
    /// Smallest slack over all conditions; negative when one fails.
    pub margin: f64,
}

/// Decides whether all roots of `a_0 + a_1 z + ... + a_n z^n` lie strictly
/// inside the unit circle. `coeffs` is given in ascending order.
pub fn jury_stable(coeffs: &[f64]) -> Result<JuryVerdict> {
    if coeffs.len() < 4 {
        return Err(Error::UnsupportedDegree(coeffs.len().saturating_sub(1)));
    }
    let n = coeffs.len() - 1;
    let an = coeffs[n];
    if !(an > 0.0) {
        return Err(Error::InvalidArgument(format!("leading coefficient must be positive, got {an}")));
    }

    let at_one: f64 = coeffs.iter().sum();
    let at_minus_one: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| if (n - i) % 2 == 0 { *a } else { -*a })
        .sum();
    let mut checks = vec![
        (JuryCondition::AtOne, at_one),
        (JuryCondition::AtMinusOne, at_minus_one),
        (JuryCondition::Constant, an - coeffs[0].abs()),
    ];

    let mut table_rows = Vec::new();
    let mut row = coeffs.to_vec();
    while row.len() > 3 {
        let m = row.len() - 1;
        let next: Vec<f64> = (0..m).map(|i| row[0] * row[i] - row[m] * row[m - i]).collect();
        checks.push((
            JuryCondition::TableRow(table_rows.len() + 1),
            next[0].abs() - next[m - 1].abs(),
        ));
        table_rows.push(next.clone());
        row = next;
    }

    let failed_condition = checks.iter().find(|(_, s)| !(*s > 0.0)).map(|(c, _)| *c);
    let margin = checks.iter().map(|(_, s)| *s).fold(f64::INFINITY, f64::min);
    Ok(JuryVerdict { stable: failed_condition.is_none(), table_rows, failed_condition, margin })
}
