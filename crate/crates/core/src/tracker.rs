//! Field position on the Kuhnian cycle.
//!
//! Two views are computed per article. The indicator is a pure function of
//! the recent window and may move in any direction. The machine stage only
//! moves forward along the cycle
//! `pre-science -> normal-science -> model-drift -> model-crisis ->
//! model-revolution -> paradigm-shift -> normal-science`.
//!
//! When the machine enters `paradigm-shift` a new epoch starts: the window
//! and the establishment count are cleared, so the new paradigm has to earn
//! normal science from scratch.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classifier::Classification;
use crate::scenario::ScenarioCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleStage {
    PreScience,
    NormalScience,
    ModelDrift,
    ModelCrisis,
    ModelRevolution,
    ParadigmShift,
}

impl CycleStage {
    pub const ALL: [CycleStage; 6] = [
        CycleStage::PreScience,
        CycleStage::NormalScience,
        CycleStage::ModelDrift,
        CycleStage::ModelCrisis,
        CycleStage::ModelRevolution,
        CycleStage::ParadigmShift,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CycleStage::PreScience => "pre-science",
            CycleStage::NormalScience => "normal-science",
            CycleStage::ModelDrift => "model-drift",
            CycleStage::ModelCrisis => "model-crisis",
            CycleStage::ModelRevolution => "model-revolution",
            CycleStage::ParadigmShift => "paradigm-shift",
        }
    }

    /// The single forward edge out of this stage.
    pub fn next(self) -> CycleStage {
        match self {
            CycleStage::PreScience => CycleStage::NormalScience,
            CycleStage::NormalScience => CycleStage::ModelDrift,
            CycleStage::ModelDrift => CycleStage::ModelCrisis,
            CycleStage::ModelCrisis => CycleStage::ModelRevolution,
            CycleStage::ModelRevolution => CycleStage::ParadigmShift,
            CycleStage::ParadigmShift => CycleStage::NormalScience,
        }
    }
}

impl fmt::Display for CycleStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CycleStage {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown cycle stage `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrackError {
    #[error("MixedFields: stream mixes fields `{expected}` and `{found}`")]
    MixedFields { expected: String, found: String },
    #[error("invalid tracker config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackerConfig {
    pub window: usize,
    pub min_establish: usize,
    pub theta_drift: f64,
    pub theta_crisis: f64,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        TrackerConfig {
            window: 20,
            min_establish: 3,
            theta_drift: 0.25,
            theta_crisis: 0.25,
        }
    }
}

impl TrackerConfig {
    pub fn validate(&self) -> Result<(), TrackError> {
        let fraction = |name: &str, v: f64| {
            if v > 0.0 && v <= 1.0 {
                Ok(())
            } else {
                Err(TrackError::InvalidConfig(format!("{name} must lie in (0, 1], got {v}")))
            }
        };
        if self.window == 0 {
            return Err(TrackError::InvalidConfig("window must be positive".into()));
        }
        if self.min_establish == 0 {
            return Err(TrackError::InvalidConfig("min_establish must be positive".into()));
        }
        fraction("theta_drift", self.theta_drift)?;
        fraction("theta_crisis", self.theta_crisis)
    }
}

/// Indicator over a window, counting establishment within the window itself.
pub fn stage_indicator(recent: &[Classification], config: &TrackerConfig) -> CycleStage {
    let established = recent.iter().filter(|c| matches!(c.scenario.p(), 1 | 2)).count();
    indicator_with_history(recent, established, config)
}

/// Indicator over a window given the number of P1/P2 articles seen since
/// the current paradigm began. Rules are tried top-down.
pub fn indicator_with_history(
    recent: &[Classification],
    established: usize,
    config: &TrackerConfig,
) -> CycleStage {
    let scenarios: Vec<ScenarioCode> = recent.iter().map(|c| c.scenario).collect();
    let count = |pred: &dyn Fn(u8) -> bool| scenarios.iter().filter(|s| pred(s.p())).count();
    let total = scenarios.len();
    let share = |k: usize| if total == 0 { 0.0 } else { k as f64 / total as f64 };

    let correlations = count(&|p| p == 5);
    let theories = count(&|p| p == 6);
    let challenges = share(count(&|p| matches!(p, 3 | 4)));
    let criticisms = share(count(&|p| p == 4));
    let drifting = total > 0 && challenges >= config.theta_drift;

    if correlations > 0 && theories > 0 {
        CycleStage::ParadigmShift
    } else if drifting && correlations + theories > 0 {
        CycleStage::ModelRevolution
    } else if total > 0
        && (criticisms >= config.theta_crisis || challenges >= 2.0 * config.theta_drift)
    {
        CycleStage::ModelCrisis
    } else if drifting {
        CycleStage::ModelDrift
    } else if established >= config.min_establish {
        CycleStage::NormalScience
    } else {
        CycleStage::PreScience
    }
}

/// Moves to `indicator` when it lies forward along the cycle; otherwise
/// stays put.
pub fn advance(current: CycleStage, indicator: CycleStage) -> CycleStage {
    let mut stage = current;
    for _ in 0..CycleStage::ALL.len() {
        stage = stage.next();
        if stage == indicator {
            return indicator;
        }
    }
    current
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimelineEntry {
    pub article_id: String,
    pub year: i32,
    pub scenario: ScenarioCode,
    pub indicator: CycleStage,
    pub stage: CycleStage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldTimeline {
    #[serde(rename = "field")]
    pub field_id: String,
    pub entries: Vec<TimelineEntry>,
}

impl FieldTimeline {
    /// Machine stage after the last entry; pre-science when empty.
    pub fn current_stage(&self) -> CycleStage {
        self.entries.last().map_or(CycleStage::PreScience, |e| e.stage)
    }

    /// Machine stages with consecutive repeats collapsed.
    pub fn stage_path(&self) -> Vec<CycleStage> {
        let mut path = vec![CycleStage::PreScience];
        for e in &self.entries {
            if path.last() != Some(&e.stage) {
                path.push(e.stage);
            }
        }
        path
    }
}

/// Folds a time-ordered stream of one field's classifications into a
/// timeline.
pub fn track(
    stream: &[Classification],
    config: &TrackerConfig,
) -> Result<FieldTimeline, TrackError> {
    config.validate()?;
    let field_id = stream.first().map(|c| c.field_id.clone()).unwrap_or_default();
    if let Some(other) = stream.iter().find(|c| c.field_id != field_id) {
        return Err(TrackError::MixedFields {
            expected: field_id,
            found: other.field_id.clone(),
        });
    }

    let mut entries = Vec::with_capacity(stream.len());
    let mut stage = CycleStage::PreScience;
    let mut epoch_start = 0;
    let mut established = 0;
    for (i, c) in stream.iter().enumerate() {
        if matches!(c.scenario.p(), 1 | 2) {
            established += 1;
        }
        let window_start = epoch_start.max((i + 1).saturating_sub(config.window));
        let indicator = indicator_with_history(&stream[window_start..=i], established, config);
        let next = advance(stage, indicator);
        if next == CycleStage::ParadigmShift && stage != CycleStage::ParadigmShift {
            epoch_start = i + 1;
            established = 0;
        }
        stage = next;
        entries.push(TimelineEntry {
            article_id: c.article_id.clone(),
            year: c.year,
            scenario: c.scenario,
            indicator,
            stage,
        });
    }
    Ok(FieldTimeline { field_id, entries })
}
