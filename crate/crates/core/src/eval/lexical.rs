//! Lexical-choice scoring: how often the system picks the reference word
//! where the baseline does not, and vice versa.

use serde::Serialize;

use crate::error::{Error, Result};

/// Target-side words aligned to one source token of interest. `None` means
/// the token had no alignment in that translation.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct AlignedTriple {
    pub system: Option<String>,
    pub baseline: Option<String>,
    pub reference: Option<String>,
}

impl AlignedTriple {
    pub fn new(system: Option<&str>, baseline: Option<&str>, reference: Option<&str>) -> Self {
        AlignedTriple {
            system: system.map(str::to_string),
            baseline: baseline.map(str::to_string),
            reference: reference.map(str::to_string),
        }
    }

    /// `(system correct, baseline correct)`, or `None` without a reference.
    fn correctness(&self) -> Option<(bool, bool)> {
        let r = self.reference.as_deref()?;
        Some((
            self.system.as_deref() == Some(r),
            self.baseline.as_deref() == Some(r),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LexicalChoice {
    pub n_improved: usize,
    pub n_degraded: usize,
    pub t: usize,
    pub rho: f64,
}

/// `rho = (N_improved - N_degraded) / T` with `T` the number of triples.
/// Triples without a reference alignment count toward `T` only.
pub fn rho(triples: &[AlignedTriple]) -> Result<LexicalChoice> {
    if triples.is_empty() {
        return Err(Error::InvalidInput("rho needs at least one token".into()));
    }
    let mut improved = 0;
    let mut degraded = 0;
    for (sys, base) in triples.iter().filter_map(AlignedTriple::correctness) {
        match (sys, base) {
            (true, false) => improved += 1,
            (false, true) => degraded += 1,
            _ => {}
        }
    }
    let t = triples.len();
    Ok(LexicalChoice {
        n_improved: improved,
        n_degraded: degraded,
        t,
        rho: (improved as f64 - degraded as f64) / t as f64,
    })
}

/// Counts indexed as `(system correct?, baseline correct?)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ConfusionMatrix {
    pub both_correct: usize,
    /// System correct, baseline incorrect.
    pub system_only: usize,
    /// System incorrect, baseline correct.
    pub baseline_only: usize,
    pub both_incorrect: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.both_correct + self.system_only + self.baseline_only + self.both_incorrect
    }
}

pub fn confusion_matrix(triples: &[AlignedTriple]) -> ConfusionMatrix {
    let mut m = ConfusionMatrix::default();
    for c in triples.iter().filter_map(AlignedTriple::correctness) {
        match c {
            (true, true) => m.both_correct += 1,
            (true, false) => m.system_only += 1,
            (false, true) => m.baseline_only += 1,
            (false, false) => m.both_incorrect += 1,
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LexicalChoiceReport {
    #[serde(flatten)]
    pub rho: LexicalChoice,
    pub confusion: ConfusionMatrix,
}

impl LexicalChoiceReport {
    pub fn new(triples: &[AlignedTriple]) -> Result<Self> {
        Ok(LexicalChoiceReport {
            rho: rho(triples)?,
            confusion: confusion_matrix(triples),
        })
    }
}

/// Source→target links for one sentence pair, 0-based.
pub type Alignment = Vec<(usize, usize)>;

/// One Pharaoh-format line: space-separated `i-j` pairs.
pub fn parse_alignment_line(line: &str) -> std::result::Result<Alignment, String> {
    line.split_whitespace()
        .map(|pair| {
            let (s, t) = pair
                .split_once('-')
                .ok_or_else(|| format!("`{pair}` is not `i-j`"))?;
            let s = s
                .parse()
                .map_err(|_| format!("bad source index in `{pair}`"))?;
            let t = t
                .parse()
                .map_err(|_| format!("bad target index in `{pair}`"))?;
            Ok((s, t))
        })
        .collect()
}

/// A Pharaoh alignment file, one line per sentence pair.
pub fn parse_alignments(text: &str) -> Result<Vec<Alignment>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| parse_alignment_line(l).map_err(|m| Error::parse(i + 1, m)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: Option<&str>, b: Option<&str>, r: Option<&str>) -> AlignedTriple {
        AlignedTriple::new(s, b, r)
    }

    #[test]
    fn rho_examples() {
        let same: Vec<_> = ["a", "b", "c"]
            .iter()
            .map(|w| t(Some(w), Some(w), Some("b")))
            .collect();
        assert_eq!(rho(&same).unwrap().rho, 0.0);

        let mut ten = vec![t(Some("x"), Some("y"), Some("x")); 3];
        ten.push(t(Some("y"), Some("x"), Some("x")));
        ten.extend(vec![t(Some("x"), Some("x"), Some("x")); 4]);
        ten.push(t(Some("x"), Some("y"), None));
        ten.push(t(None, None, Some("z")));
        let r = rho(&ten).unwrap();
        assert_eq!((r.n_improved, r.n_degraded, r.t), (3, 1, 10));
        assert!((r.rho - 0.2).abs() < 1e-15);

        let best = vec![t(Some("r"), Some("q"), Some("r")); 5];
        assert_eq!(rho(&best).unwrap().rho, 1.0);
        assert!(rho(&[]).is_err());
    }

    #[test]
    fn confusion_examples() {
        let all = vec![t(Some("r"), Some("r"), Some("r")); 4];
        assert_eq!(
            confusion_matrix(&all),
            ConfusionMatrix {
                both_correct: 4,
                ..Default::default()
            }
        );

        let six = [
            t(Some("a"), Some("a"), Some("a")),
            t(Some("a"), Some("b"), Some("a")),
            t(Some("a"), Some("b"), Some("a")),
            t(Some("b"), Some("a"), Some("a")),
            t(Some("c"), Some("b"), Some("a")),
            t(None, Some("a"), Some("a")),
        ];
        let m = confusion_matrix(&six);
        assert_eq!(
            m,
            ConfusionMatrix {
                both_correct: 1,
                system_only: 2,
                baseline_only: 2,
                both_incorrect: 1
            }
        );
        let r = rho(&six).unwrap();
        assert_eq!(
            r.rho * r.t as f64,
            m.system_only as f64 - m.baseline_only as f64
        );
    }

    #[test]
    fn pharaoh() {
        assert_eq!(
            parse_alignment_line("0-0 1-2 2-1").unwrap(),
            [(0, 0), (1, 2), (2, 1)]
        );
        assert_eq!(parse_alignment_line("").unwrap(), []);
        assert!(parse_alignment_line("0-").is_err());
        assert!(parse_alignment_line("0:1").is_err());
        let all = parse_alignments("0-0\n\n1-1 0-1\n").unwrap();
        assert_eq!(all.len(), 3);
        assert!(matches!(
            parse_alignments("0-0\nx-1"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    fn word() -> impl Strategy<Value = Option<String>> {
        proptest::option::of(prop_oneof![
            Just("a".to_string()),
            Just("b".to_string()),
            Just("c".to_string())
        ])
    }

    proptest! {
        #[test]
        fn identities(triples in proptest::collection::vec((word(), word(), word()), 1..40)) {
            let ts: Vec<AlignedTriple> = triples
                .into_iter()
                .map(|(s, b, r)| AlignedTriple { system: s, baseline: b, reference: r })
                .collect();
            let r = rho(&ts).unwrap();
            let m = confusion_matrix(&ts);
            prop_assert!((-1.0..=1.0).contains(&r.rho));
            prop_assert_eq!(r.n_improved as i64 - r.n_degraded as i64, m.system_only as i64 - m.baseline_only as i64);
            prop_assert_eq!(m.total(), ts.iter().filter(|t| t.reference.is_some()).count());

            let swapped: Vec<AlignedTriple> = ts
                .iter()
                .map(|t| AlignedTriple { system: t.baseline.clone(), baseline: t.system.clone(), reference: t.reference.clone() })
                .collect();
            prop_assert_eq!(rho(&swapped).unwrap().rho, -r.rho);
            let same: Vec<AlignedTriple> = ts
                .iter()
                .map(|t| AlignedTriple { system: t.system.clone(), baseline: t.system.clone(), reference: t.reference.clone() })
                .collect();
            prop_assert_eq!(rho(&same).unwrap().rho, 0.0);
        }
    }
}
