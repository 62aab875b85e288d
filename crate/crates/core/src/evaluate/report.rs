//! Precision/recall/F1 report shared by the scorers. Values are kept at full
//! precision; rounding (one decimal, half-up) happens only when rendering.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::Serialize;

/// Counts and derived percentages for one mention type.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PrfCounts {
    pub gold: usize,
    pub pred: usize,
    pub correct: usize,
}

impl PrfCounts {
    pub fn new(gold: usize, pred: usize, correct: usize) -> Self {
        PrfCounts {
            gold,
            pred,
            correct,
        }
    }

    /// Percentage of predicted mentions that are correct.
    pub fn precision(&self) -> f64 {
        if self.pred == 0 {
            0.0
        } else {
            100.0 * self.correct as f64 / self.pred as f64
        }
    }

    /// Percentage of gold mentions that were found.
    pub fn recall(&self) -> f64 {
        if self.gold == 0 {
            0.0
        } else {
            100.0 * self.correct as f64 / self.gold as f64
        }
    }

    /// Harmonic mean of precision and recall; 0 when both are 0.
    pub fn f1(&self) -> f64 {
        let p = self.precision();
        let r = self.recall();
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }

    pub fn merge(&mut self, other: &PrfCounts) {
        self.gold += other.gold;
        self.pred += other.pred;
        self.correct += other.correct;
    }
}

impl Serialize for PrfCounts {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("PrfCounts", 6)?;
        s.serialize_field("precision", &self.precision())?;
        s.serialize_field("recall", &self.recall())?;
        s.serialize_field("f1", &self.f1())?;
        s.serialize_field("gold_count", &self.gold)?;
        s.serialize_field("pred_count", &self.pred)?;
        s.serialize_field("correct_count", &self.correct)?;
        s.end()
    }
}

/// Per-type and micro-aggregated scores. Micro aggregates counts, not
/// averages.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct MetricReport {
    pub per_type: BTreeMap<String, PrfCounts>,
    pub micro: PrfCounts,
}

impl MetricReport {
    pub fn from_per_type(per_type: BTreeMap<String, PrfCounts>) -> Self {
        let mut micro = PrfCounts::default();
        for counts in per_type.values() {
            micro.merge(counts);
        }
        MetricReport { per_type, micro }
    }
}

/// Round to `decimals` places, halves away from zero.
pub fn round_half_up(value: f64, decimals: u32) -> f64 {
    let factor = 10f64.powi(decimals as i32);
    (value * factor).round() / factor
}

impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .per_type
            .keys()
            .map(|k| k.len())
            .chain(std::iter::once("all (micro)".len()))
            .max()
            .unwrap_or(4);
        writeln!(
            f,
            "{:<width$}  {:>9}  {:>6}  {:>6}  {:>6}  {:>7}  {:>7}",
            "type", "precision", "recall", "f1", "gold", "pred", "correct"
        )?;
        let row = |f: &mut fmt::Formatter<'_>, name: &str, c: &PrfCounts| {
            writeln!(
                f,
                "{name:<width$}  {:>9.1}  {:>6.1}  {:>6.1}  {:>6}  {:>7}  {:>7}",
                round_half_up(c.precision(), 1),
                round_half_up(c.recall(), 1),
                round_half_up(c.f1(), 1),
                c.gold,
                c.pred,
                c.correct,
            )
        };
        for (name, counts) in &self.per_type {
            row(f, name, counts)?;
        }
        row(f, "all (micro)", &self.micro)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f1_is_harmonic_mean() {
        let c = PrfCounts::new(4, 2, 2);
        assert_eq!(c.precision(), 100.0);
        assert_eq!(c.recall(), 50.0);
        assert!((c.f1() - 200.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_counts_give_zero_scores() {
        let c = PrfCounts::default();
        assert_eq!(c.precision(), 0.0);
        assert_eq!(c.recall(), 0.0);
        assert_eq!(c.f1(), 0.0);
    }

    #[test]
    fn rounding_is_half_up() {
        // 0.25 and 0.75 are exact in binary, so the half-up behaviour of the
        // scaled round() is observable.
        assert_eq!(round_half_up(0.25, 1), 0.3);
        assert_eq!(round_half_up(0.75, 1), 0.8);
        assert_eq!(round_half_up(61.04, 1), 61.0);
        assert_eq!(round_half_up(200.0 / 3.0, 1), 66.7);
    }

    #[test]
    fn micro_sums_counts() {
        let mut per_type = BTreeMap::new();
        per_type.insert("A".to_string(), PrfCounts::new(2, 1, 1));
        per_type.insert("B".to_string(), PrfCounts::new(3, 4, 2));
        let report = MetricReport::from_per_type(per_type);
        assert_eq!(report.micro, PrfCounts::new(5, 5, 3));
    }
}
