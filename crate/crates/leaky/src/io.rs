//! JSON instance and strategy files, number formatting and atomic writes.

use std::fs;
use std::path::{Path, PathBuf};

use leaky_core::{validate_instance, GameInstance, LeakageModel, MixedStrategy, PureStrategy};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Probability sums within this distance of one are rescaled on load.
pub const RENORMALIZE_TOL: f64 = 1e-9;

/// Rounds to 12 significant digits. Negative zero becomes zero.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Shortest decimal text of `round12(x)`.
pub fn fmt12(x: f64) -> String {
    format!("{}", round12(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Pril,
    Adil,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Pril => "pril",
            ModelKind::Adil => "adil",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LeakageSpec {
    pub model: ModelKind,
    pub p0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub k: usize,
    pub rewards: Vec<f64>,
    pub costs: Vec<f64>,
    pub leakage: LeakageSpec,
}

impl InstanceFile {
    pub fn from_model(g: &GameInstance, model: &LeakageModel) -> Self {
        let leakage = match model {
            LeakageModel::Pril { p0, p, support } => {
                LeakageSpec { model: ModelKind::Pril, p0: *p0, p: Some(p.clone()), support: Some(support.clone()) }
            }
            LeakageModel::Adil { p0, support } => {
                LeakageSpec { model: ModelKind::Adil, p0: *p0, p: None, support: Some(support.clone()) }
            }
        };
        InstanceFile { n: g.n(), k: g.k, rewards: g.rewards.clone(), costs: g.costs.clone(), leakage }
    }

    /// Converts to validated core types.
    pub fn into_model(self) -> CliResult<(GameInstance, LeakageModel)> {
        let n = self.n;
        if self.rewards.len() != n || self.costs.len() != n {
            return Err(CliError::input(format!(
                "n = {n} but {} rewards and {} costs are given",
                self.rewards.len(),
                self.costs.len()
            )));
        }
        let game = GameInstance::new(self.k, self.rewards, self.costs)?;
        let spec = self.leakage;
        let model = match spec.model {
            ModelKind::Pril => {
                let p = spec.p.ok_or_else(|| CliError::input("pril leakage needs a \"p\" vector"))?;
                let support = spec
                    .support
                    .unwrap_or_else(|| p.iter().enumerate().filter(|(_, &v)| v > 0.0).map(|(i, _)| i).collect());
                LeakageModel::Pril { p0: spec.p0, p, support }
            }
            ModelKind::Adil => {
                if spec.p.is_some() {
                    return Err(CliError::input("adil leakage takes no \"p\" vector"));
                }
                LeakageModel::adil(spec.p0, spec.support.unwrap_or_else(|| (0..n).collect()))
            }
        };
        let violations = validate_instance(&game, &model);
        if !violations.is_empty() {
            let msg: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(CliError::input(format!("invalid instance: {}", msg.join("; "))));
        }
        Ok((game, model))
    }
}

pub fn parse_instance(text: &str) -> CliResult<(GameInstance, LeakageModel)> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| CliError::input(format!("malformed instance: {e}")))?;
    file.into_model()
}

pub fn load_instance(path: &Path) -> CliResult<(GameInstance, LeakageModel)> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomEntry {
    pub targets: Vec<usize>,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyFile {
    pub atoms: Vec<AtomEntry>,
}

impl StrategyFile {
    pub fn from_strategy(ms: &MixedStrategy) -> Self {
        let atoms =
            ms.atoms().iter().map(|(s, p)| AtomEntry { targets: s.targets().to_vec(), prob: round12(*p) }).collect();
        StrategyFile { atoms }
    }

    /// Builds a mixed strategy, rescaling probabilities whose sum is within
    /// [`RENORMALIZE_TOL`] of one.
    pub fn into_strategy(self, n: usize, k: usize) -> CliResult<MixedStrategy> {
        let total: f64 = self.atoms.iter().map(|a| a.prob).sum();
        if !((total - 1.0).abs() <= RENORMALIZE_TOL) {
            return Err(CliError::input(format!("strategy probabilities sum to {total}")));
        }
        let atoms = self
            .atoms
            .into_iter()
            .map(|a| Ok((PureStrategy::new(a.targets, n)?, a.prob / total)))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(MixedStrategy::new(atoms, n, k)?)
    }
}

pub fn parse_strategy(text: &str, n: usize, k: usize) -> CliResult<MixedStrategy> {
    let file: StrategyFile =
        serde_json::from_str(text).map_err(|e| CliError::input(format!("malformed strategy: {e}")))?;
    file.into_strategy(n, k)
}

pub fn load_strategy(path: &Path, n: usize, k: usize) -> CliResult<MixedStrategy> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    parse_strategy(&text, n, k)
}

pub fn strategy_json(ms: &MixedStrategy) -> String {
    serde_json::to_string_pretty(&StrategyFile::from_strategy(ms)).expect("strategy serializes")
}

/// Writes `contents` to a sibling temporary file and renames it over `path`,
/// so a failed write never leaves a partial file behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| CliError::input(format!("{} is not a file path", path.display())))?;
    let mut tmp_name = name.to_os_string();
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp: PathBuf = dir.join(tmp_name);
    let result = fs::write(&tmp, contents).and_then(|_| fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(CliError::input(format!("cannot write {}: {e}", path.display())));
    }
    Ok(())
}
