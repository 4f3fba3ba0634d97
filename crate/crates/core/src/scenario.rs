//! The twelve-element scenario algebra.
//!
//! A scenario combines one method element (M1..M3), one observation element
//! (N1..N3) and one conclusion element (P1..P6). Element meanings:
//!
//! | code | meaning                          |
//! |------|----------------------------------|
//! | M1   | established method reused        |
//! | M2   | improved or adapted method       |
//! | M3   | new method                       |
//! | N1   | confirmatory observation         |
//! | N2   | anomalous or uncertain observation |
//! | N3   | new observation                  |
//! | P1   | affirms the model                |
//! | P2   | extends the model                |
//! | P3   | questions the model (drift)      |
//! | P4   | criticizes the model (crisis)    |
//! | P5   | proposes a new correlation model |
//! | P6   | proposes a new theory            |
//!
//! Questioning or criticizing a model needs a non-confirmatory observation,
//! so the six triples `M* N1 P3` and `M* N1 P4` are invalid and 48 of the 54
//! one-per-set triples remain.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("choose({n}, {r}) is undefined: r exceeds n")]
    InvalidArgs { n: u64, r: u64 },
    #[error("choose({n}, {r}) overflows 128 bits")]
    Overflow { n: u64, r: u64 },
    #[error("element index {index} out of range for set {set}")]
    IndexOutOfRange { set: ElementSet, index: u8 },
    #[error("cannot parse `{0}` as a scenario element")]
    ParseElement(String),
    #[error("cannot parse `{0}` as a scenario code (expected e.g. \"M1 N2 P3\")")]
    ParseScenario(String),
    #[error("unknown modular ontology `{0}` (expected formalism, model or paradigm-shift)")]
    UnknownModule(String),
    #[error("scenario {scenario} is invalid: {rule}")]
    InvalidScenario {
        scenario: ScenarioCode,
        rule: &'static str,
    },
}

/// Rule text attached to invalid scenarios.
pub const NON_CONFIRMATORY_RULE: &str =
    "questioning or criticizing a model requires a non-confirmatory observation (N2 or N3)";

/// Binomial coefficient in exact integer arithmetic.
pub fn choose(n: u64, r: u64) -> Result<u128, ScenarioError> {
    if r > n {
        return Err(ScenarioError::InvalidArgs { n, r });
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) is divisible by (i + 1): it is choose(n, i+1) * (i+1).
        acc = acc
            .checked_mul(u128::from(n - i))
            .ok_or(ScenarioError::Overflow { n, r })?
            / u128::from(i + 1);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementSet {
    /// Methods.
    M,
    /// Observations.
    N,
    /// Conclusions regarding the model.
    P,
}

impl ElementSet {
    pub fn size(self) -> u8 {
        match self {
            ElementSet::M | ElementSet::N => 3,
            ElementSet::P => 6,
        }
    }

    fn letter(self) -> char {
        match self {
            ElementSet::M => 'M',
            ElementSet::N => 'N',
            ElementSet::P => 'P',
        }
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementCode {
    set: ElementSet,
    index: u8,
}

impl ElementCode {
    pub fn new(set: ElementSet, index: u8) -> Result<Self, ScenarioError> {
        if index == 0 || index > set.size() {
            return Err(ScenarioError::IndexOutOfRange { set, index });
        }
        Ok(ElementCode { set, index })
    }

    pub fn set(self) -> ElementSet {
        self.set
    }

    pub fn index(self) -> u8 {
        self.index
    }

    /// All twelve elements, M1..M3, N1..N3, P1..P6.
    pub fn all() -> Vec<ElementCode> {
        [ElementSet::M, ElementSet::N, ElementSet::P]
            .into_iter()
            .flat_map(|set| (1..=set.size()).map(move |index| ElementCode { set, index }))
            .collect()
    }
}

impl fmt::Display for ElementCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.set, self.index)
    }
}

impl FromStr for ElementCode {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScenarioError::ParseElement(s.to_string());
        let mut chars = s.chars();
        let set = match chars.next() {
            Some('M') => ElementSet::M,
            Some('N') => ElementSet::N,
            Some('P') => ElementSet::P,
            _ => return Err(err()),
        };
        let digits = chars.as_str();
        if digits.len() != 1 {
            return Err(err());
        }
        let index: u8 = digits.parse().map_err(|_| err())?;
        ElementCode::new(set, index).map_err(|_| err())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModularOntology {
    /// Articles that affirm or extend an established model (P1, P2).
    Formalism,
    /// Articles that question or criticize an established model (P3, P4).
    Model,
    /// Articles that introduce a new correlation model or theory (P5, P6).
    ParadigmShift,
}

impl ModularOntology {
    pub const ALL: [ModularOntology; 3] = [
        ModularOntology::Formalism,
        ModularOntology::Model,
        ModularOntology::ParadigmShift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModularOntology::Formalism => "formalism",
            ModularOntology::Model => "model",
            ModularOntology::ParadigmShift => "paradigm-shift",
        }
    }

    /// Conclusion indices owned by this ontology.
    pub fn conclusions(self) -> [u8; 2] {
        match self {
            ModularOntology::Formalism => [1, 2],
            ModularOntology::Model => [3, 4],
            ModularOntology::ParadigmShift => [5, 6],
        }
    }

    /// Size of the element pool used for the unrestricted 3-subset count:
    /// all methods, the observations the ontology admits, and its two
    /// conclusions.
    pub fn pool_size(self) -> u64 {
        match self {
            ModularOntology::Formalism => 3 + 3 + 2,
            ModularOntology::Model => 3 + 2 + 2,
            ModularOntology::ParadigmShift => 3 + 3 + 2,
        }
    }

    /// Column heading used in the three-column scenario table.
    pub fn table_heading(self) -> &'static str {
        match self {
            ModularOntology::Formalism => "Formalism ontology scenarios",
            ModularOntology::Model => "Model ontology scenarios",
            ModularOntology::ParadigmShift => "Paradigm shift ontology",
        }
    }
}

impl fmt::Display for ModularOntology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModularOntology {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| ScenarioError::UnknownModule(s.to_string()))
    }
}

/// Unrestricted 3-subset count over the ontology's element pool.
///
/// These counts overcount on purpose; valid scenarios are only ever
/// generated one element per set by [`enumerate_valid`].
pub fn pool_combinations(module: ModularOntology) -> u128 {
    choose(module.pool_size(), 3).expect("pool sizes are at least 3")
}

/// Weights for the merit score `p·w_p + n·w_n + m·w_m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeritWeights {
    pub p: u32,
    pub n: u32,
    pub m: u32,
}

impl Default for MeritWeights {
    fn default() -> Self {
        MeritWeights { p: 16, n: 4, m: 1 }
    }
}

/// One method, one observation and one conclusion element.
///
/// Ordering is lexicographic by `(m, n, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScenarioCode {
    m: u8,
    n: u8,
    p: u8,
}

impl ScenarioCode {
    pub fn new(m: u8, n: u8, p: u8) -> Result<Self, ScenarioError> {
        ElementCode::new(ElementSet::M, m)?;
        ElementCode::new(ElementSet::N, n)?;
        ElementCode::new(ElementSet::P, p)?;
        Ok(ScenarioCode { m, n, p })
    }

    pub fn from_elements(
        m: ElementCode,
        n: ElementCode,
        p: ElementCode,
    ) -> Result<Self, ScenarioError> {
        let check = |e: ElementCode, set| {
            if e.set() == set {
                Ok(e.index())
            } else {
                Err(ScenarioError::ParseScenario(format!("{m} {n} {p}")))
            }
        };
        ScenarioCode::new(
            check(m, ElementSet::M)?,
            check(n, ElementSet::N)?,
            check(p, ElementSet::P)?,
        )
    }

    pub fn m(self) -> u8 {
        self.m
    }

    pub fn n(self) -> u8 {
        self.n
    }

    pub fn p(self) -> u8 {
        self.p
    }

    /// Every one-per-set triple, valid or not, in lexicographic order.
    pub fn all_triples() -> impl Iterator<Item = ScenarioCode> {
        (1..=3).flat_map(|m| {
            (1..=3).flat_map(move |n| (1..=6).map(move |p| ScenarioCode { m, n, p }))
        })
    }

    pub fn is_valid(self) -> bool {
        !(matches!(self.p, 3 | 4) && self.n == 1)
    }

    pub fn validate(self) -> Result<Self, ScenarioError> {
        if self.is_valid() {
            Ok(self)
        } else {
            Err(ScenarioError::InvalidScenario {
                scenario: self,
                rule: NON_CONFIRMATORY_RULE,
            })
        }
    }

    pub fn module(self) -> Result<ModularOntology, ScenarioError> {
        self.validate()?;
        Ok(match self.p {
            1 | 2 => ModularOntology::Formalism,
            3 | 4 => ModularOntology::Model,
            _ => ModularOntology::ParadigmShift,
        })
    }

    pub fn merit(self) -> Result<u32, ScenarioError> {
        self.merit_with(MeritWeights::default())
    }

    pub fn merit_with(self, w: MeritWeights) -> Result<u32, ScenarioError> {
        self.validate()?;
        Ok(w.p * u32::from(self.p) + w.n * u32::from(self.n) + w.m * u32::from(self.m))
    }
}

impl fmt::Display for ScenarioCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{} N{} P{}", self.m, self.n, self.p)
    }
}

impl FromStr for ScenarioCode {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ScenarioError::ParseScenario(s.to_string());
        let parts: Vec<&str> = s.split(' ').collect();
        let [m, n, p] = parts.as_slice() else {
            return Err(err());
        };
        let m: ElementCode = m.parse().map_err(|_| err())?;
        let n: ElementCode = n.parse().map_err(|_| err())?;
        let p: ElementCode = p.parse().map_err(|_| err())?;
        ScenarioCode::from_elements(m, n, p).map_err(|_| err())
    }
}

impl Serialize for ScenarioCode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ScenarioCode {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn is_valid(code: ScenarioCode) -> bool {
    code.is_valid()
}

pub fn module_of(code: ScenarioCode) -> Result<ModularOntology, ScenarioError> {
    code.module()
}

pub fn merit_score(code: ScenarioCode) -> Result<u32, ScenarioError> {
    code.merit()
}

/// Valid scenarios in lexicographic `(m, n, p)` order, optionally restricted
/// to one modular ontology.
pub fn enumerate_valid(module: Option<ModularOntology>) -> Vec<ScenarioCode> {
    ScenarioCode::all_triples()
        .filter(|s| s.is_valid())
        .filter(|s| module.is_none_or(|m| s.module() == Ok(m)))
        .collect()
}

/// Renders the three ontology columns side by side, tab separated, with a
/// heading row. Shorter columns leave their cells empty.
pub fn render_table() -> String {
    let columns: Vec<Vec<ScenarioCode>> = ModularOntology::ALL
        .into_iter()
        .map(|m| enumerate_valid(Some(m)))
        .collect();
    let rows = columns.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = ModularOntology::ALL
        .iter()
        .map(|m| m.table_heading())
        .collect::<Vec<_>>()
        .join("\t");
    out.push('\n');
    for i in 0..rows {
        let cells: Vec<String> = columns
            .iter()
            .map(|c| c.get(i).map(ToString::to_string).unwrap_or_default())
            .collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

/// Parses the output of [`render_table`] back into its three columns.
pub fn parse_table(text: &str) -> Result<[Vec<ScenarioCode>; 3], ScenarioError> {
    let mut columns: [Vec<ScenarioCode>; 3] = Default::default();
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split('\t').collect();
        if cells.len() != 3 {
            return Err(ScenarioError::ParseScenario(line.to_string()));
        }
        for (column, cell) in columns.iter_mut().zip(cells) {
            if !cell.is_empty() {
                column.push(cell.parse()?);
            }
        }
    }
    Ok(columns)
}
