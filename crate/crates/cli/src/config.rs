use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use qutrit_core::channel::ChannelRep;
use qutrit_core::circuit::{Circuit, NoiseConfig};
use qutrit_core::decomp::{ls_channel_circuit, wh_channel_circuit, SConfig, ENV_WIRES, SYSTEM_WIRES};
use qutrit_core::layout::CouplingMap;
use qutrit_core::qutrit::ChannelCircuit;
use qutrit_core::tomography::DEFAULT_SHOTS;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelName {
    Ls,
    Wh,
    Id,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Analytic,
    Circuit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChoiMethod {
    Direct,
    Linear,
    Analytic,
}

/// `"zero"` or a noise object inline in the consolidated config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NoiseSpec {
    Named(String),
    Inline(NoiseConfig),
}

/// Consolidated experiment settings; every field is optional in the JSON file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub channel: Option<ChannelName>,
    pub method: Option<Method>,
    pub choi_method: Option<ChoiMethod>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub noise: Option<NoiseSpec>,
    pub coupling: Option<String>,
    pub config_k: Option<u8>,
    pub grid: Option<usize>,
    pub choi_file: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    /// Channel under study
    #[arg(long, value_enum)]
    pub channel: Option<ChannelName>,
    /// Shots per measurement setting; 0 uses exact probabilities
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// "zero" or a path to a noise JSON file
    #[arg(long)]
    pub noise: Option<String>,
    /// Preset name (ibmqx4, tokyo, tokyo6) or coupling-map JSON file
    #[arg(long)]
    pub coupling: Option<String>,
    /// Which of the four permutation configurations (1-4) builds the channel circuit
    #[arg(long = "config-k")]
    pub config_k: Option<u8>,
    /// Consolidated JSON config; explicit flags take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Fully resolved settings for one command.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub channel: ChannelName,
    pub method: Method,
    pub choi_method: ChoiMethod,
    pub shots: u64,
    pub seed: u64,
    pub noise: NoiseConfig,
    pub coupling: Option<CouplingMap>,
    pub config_k: SConfig,
    pub grid: usize,
    pub choi_file: Option<PathBuf>,
    pub out: PathBuf,
}

fn read_noise(spec: &str) -> Result<NoiseConfig, CliError> {
    if spec == "zero" {
        return Ok(NoiseConfig::zero());
    }
    let text = fs::read_to_string(spec).map_err(|e| CliError::config(format!("cannot read noise file {spec}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::config(format!("invalid noise file {spec}: {e}")))
}

pub fn load_file_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::config(format!("invalid config {}: {e}", path.display())))
}

impl ExperimentConfig {
    pub fn resolve(
        common: &CommonArgs,
        method: Option<Method>,
        choi_method: Option<ChoiMethod>,
        grid: Option<usize>,
        choi_file: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        let file = match &common.config {
            Some(p) => load_file_config(p)?,
            None => FileConfig::default(),
        };
        let noise = match (&common.noise, &file.noise) {
            (Some(s), _) => read_noise(s)?,
            (None, Some(NoiseSpec::Named(s))) => read_noise(s)?,
            (None, Some(NoiseSpec::Inline(n))) => *n,
            (None, None) => NoiseConfig::zero(),
        };
        let coupling = match common.coupling.as_ref().or(file.coupling.as_ref()) {
            Some(name) => Some(CouplingMap::load(name).map_err(|e| CliError::config(e.to_string()))?),
            None => None,
        };
        let k = common.config_k.or(file.config_k).unwrap_or(SConfig::default().k());
        let config_k = SConfig::new(k).map_err(|e| CliError::config(e.to_string()))?;
        let grid = grid.or(file.grid).unwrap_or(qutrit_core::tomography::DEFAULT_GRID);
        if grid < 2 {
            return Err(CliError::config("grid needs at least 2 points"));
        }
        let choi_file = choi_file.or(file.choi_file);
        if let Some(p) = &choi_file {
            if !p.exists() {
                return Err(CliError::config(format!("Choi file {} does not exist", p.display())));
            }
        }
        Ok(ExperimentConfig {
            channel: common.channel.or(file.channel).unwrap_or(ChannelName::Ls),
            method: method.or(file.method).unwrap_or(Method::Analytic),
            choi_method: choi_method.or(file.choi_method).unwrap_or(ChoiMethod::Analytic),
            shots: common.shots.or(file.shots).unwrap_or(DEFAULT_SHOTS),
            seed: common.seed.or(file.seed).unwrap_or(0),
            noise,
            coupling,
            config_k,
            grid,
            choi_file,
            out: common.out.clone().or(file.out).unwrap_or_else(|| PathBuf::from(".")),
        })
    }

    pub fn channel_rep(&self) -> ChannelRep {
        match self.channel {
            ChannelName::Ls => ChannelRep::ls(),
            ChannelName::Wh => ChannelRep::wh(),
            ChannelName::Id => ChannelRep::identity(3),
        }
    }

    pub fn noise(&self) -> Option<&NoiseConfig> {
        (!self.noise.is_zero()).then_some(&self.noise)
    }

    /// The channel circuit, routed onto the coupling map when one is configured.
    pub fn channel_circuit(&self, layout: Option<&CouplingMap>) -> Result<ChannelCircuit, CliError> {
        let cc = match self.channel {
            ChannelName::Ls => ls_channel_circuit(self.config_k, layout)?,
            ChannelName::Wh => wh_channel_circuit(self.config_k, layout)?,
            ChannelName::Id => match layout {
                None => ChannelCircuit::new(Circuit::new(4)?, SYSTEM_WIRES, ENV_WIRES)?,
                Some(map) => {
                    let (system, env) = map
                        .placement()
                        .map(|p| (p.system, p.env))
                        .unwrap_or((SYSTEM_WIRES, ENV_WIRES));
                    ChannelCircuit::new(Circuit::new(map.n_qubits())?, system, env)?
                }
            },
        };
        Ok(cc)
    }

    pub fn output_path(&self, name: &str) -> Result<PathBuf, CliError> {
        fs::create_dir_all(&self.out)
            .map_err(|e| CliError::config(format!("cannot create {}: {e}", self.out.display())))?;
        Ok(self.out.join(name))
    }
}
