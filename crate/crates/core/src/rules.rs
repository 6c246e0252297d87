//! Temporal association rules drawn from agro-triples.
//!
//! Each triple `(l, j, t)` yields rules `j \ {d} →_t {d}` for the eligible
//! target dimensions `d ∈ j`. Support and confidence are exact fractions of
//! location counts; thresholds are compared as fractions too.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::concepts::TripleSet;
use crate::cube::{DataCube, DimSet, TimeSet};

/// A non-negative exact ratio `num / den` that keeps its unreduced counts.
/// Comparison is by value, so `6/10 == 3/5`.
#[derive(Debug, Clone, Copy)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "fraction with zero denominator");
        Fraction { num, den }
    }

    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Decimal rendering rounded half-up to `places` digits.
    pub fn to_decimal(&self, places: u32) -> String {
        let scale = 10u128.pow(places);
        let scaled = (2 * self.num as u128 * scale + self.den as u128) / (2 * self.den as u128);
        let int = scaled / scale;
        if places == 0 {
            return int.to_string();
        }
        format!("{int}.{:0width$}", scaled % scale, width = places as usize)
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Fraction {}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid ratio `{0}`: expected a decimal like 0.7 or a fraction like 7/10")]
pub struct ParseFractionError(String);

impl FromStr for Fraction {
    type Err = ParseFractionError;

    /// Accepts `p/q` or a plain decimal; decimals are converted exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseFractionError(s.to_string());
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let num: u64 = p.trim().parse().map_err(|_| bad())?;
            let den: u64 = q.trim().parse().map_err(|_| bad())?;
            return if den == 0 {
                Err(bad())
            } else {
                Ok(Fraction::new(num, den))
            };
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if (int.is_empty() && frac.is_empty())
            || !int.chars().all(|c| c.is_ascii_digit())
            || !frac.chars().all(|c| c.is_ascii_digit())
            || frac.len() > 18
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac_val: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Ok(Fraction::new(num, den))
    }
}

/// Which count divides the support numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SupportDenominator {
    /// `|L|`, the usual itemset-mining convention.
    #[default]
    Locations,
    /// `|J|`, the literal dimension-count formula. Support can exceed 1.
    Dimensions,
}

impl FromStr for SupportDenominator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "locations" => Ok(SupportDenominator::Locations),
            "dimensions" => Ok(SupportDenominator::Dimensions),
            other => Err(format!("unknown support denominator `{other}`")),
        }
    }
}

impl fmt::Display for SupportDenominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SupportDenominator::Locations => "locations",
            SupportDenominator::Dimensions => "dimensions",
        })
    }
}

/// The items of a rule `antecedent →_times consequent`, unscored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Implication {
    pub antecedent: DimSet,
    pub consequent: DimSet,
    pub times: TimeSet,
}

impl Implication {
    pub fn itemset(&self) -> DimSet {
        self.antecedent.union(&self.consequent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationRule {
    pub items: Implication,
    pub support: Fraction,
    pub confidence: Fraction,
    /// Index into the [`TripleSet`] the rule was generated from.
    pub source_triple: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error(
        "confidence is undefined: no location carries the antecedent at the rule's timestamps"
    )]
    UndefinedConfidence,
}

/// Number of locations carrying every dimension of `dims` at every time of `times`.
fn holders(cube: &DataCube, dims: &DimSet, times: &TimeSet) -> u64 {
    cube.locs_with_box(dims, times).len() as u64
}

pub fn support(cube: &DataCube, rule: &Implication, denominator: SupportDenominator) -> Fraction {
    let den = match denominator {
        SupportDenominator::Locations => cube.n_locs(),
        SupportDenominator::Dimensions => cube.n_dims(),
    };
    Fraction::new(holders(cube, &rule.itemset(), &rule.times), den as u64)
}

pub fn confidence(cube: &DataCube, rule: &Implication) -> Result<Fraction, RuleError> {
    let body = holders(cube, &rule.antecedent, &rule.times);
    if body == 0 {
        return Err(RuleError::UndefinedConfidence);
    }
    Ok(Fraction::new(
        holders(cube, &rule.itemset(), &rule.times),
        body,
    ))
}

#[derive(Debug, Clone, Default)]
pub struct RuleOptions {
    /// Dimensions allowed as consequents; all dimensions when `None`.
    pub target_dims: Option<DimSet>,
    /// Timestamps a source triple must cover; unrestricted when `None`.
    pub target_times: Option<TimeSet>,
    pub denominator: SupportDenominator,
}

/// Duplicate-free rules ordered by (antecedent, consequent, times).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RuleSet {
    rules: Vec<AssociationRule>,
}

impl RuleSet {
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, AssociationRule> {
        self.rules.iter()
    }

    pub fn as_slice(&self) -> &[AssociationRule] {
        &self.rules
    }

    pub fn find(&self, items: &Implication) -> Option<&AssociationRule> {
        self.rules
            .binary_search_by(|r| r.items.cmp(items))
            .ok()
            .map(|i| &self.rules[i])
    }
}

impl<'a> IntoIterator for &'a RuleSet {
    type Item = &'a AssociationRule;
    type IntoIter = std::slice::Iter<'a, AssociationRule>;

    fn into_iter(self) -> Self::IntoIter {
        self.rules.iter()
    }
}

/// Emits `intent \ {d} →_times {d}` for every triple and eligible target `d`,
/// skipping empty antecedents.
pub fn generate_rules(cube: &DataCube, triples: &TripleSet, opts: &RuleOptions) -> RuleSet {
    let mut found: BTreeMap<Implication, usize> = BTreeMap::new();
    for (idx, triple) in triples.iter().enumerate() {
        if let Some(tt) = &opts.target_times {
            if !tt.is_subset(&triple.times) {
                continue;
            }
        }
        for target in triple.intent.iter() {
            if let Some(td) = &opts.target_dims {
                if !td.contains(target) {
                    continue;
                }
            }
            let consequent = DimSet::from_indices(cube.n_dims(), [target]);
            let antecedent = triple.intent.difference(&consequent);
            if antecedent.is_empty() {
                continue;
            }
            found
                .entry(Implication {
                    antecedent,
                    consequent,
                    times: triple.times.clone(),
                })
                .or_insert(idx);
        }
    }
    let rules = found
        .into_iter()
        .map(|(items, source_triple)| {
            let support = support(cube, &items, opts.denominator);
            // The source extent carries the antecedent, so the body count is positive.
            let confidence =
                confidence(cube, &items).expect("source extent carries the antecedent");
            AssociationRule {
                items,
                support,
                confidence,
                source_triple,
            }
        })
        .collect();
    RuleSet { rules }
}

/// Keeps rules with `support >= min_support` and `confidence >= min_confidence`.
pub fn filter_rules(rules: &RuleSet, min_support: Fraction, min_confidence: Fraction) -> RuleSet {
    RuleSet {
        rules: rules
            .iter()
            .filter(|r| r.support >= min_support && r.confidence >= min_confidence)
            .cloned()
            .collect(),
    }
}
