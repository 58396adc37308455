use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clustering::{CrpParams, InitMode, PageRankConfig, DEFAULT_MIN_CLUSTER_SIZE};
use crate::embeddings::ContextSpec;
use crate::error::{in_file, read_to_string, Error, Result};
use crate::sense_select::{MonosemousLabel, DEFAULT_MAX_SENSES};

/// Sense induction algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Kmeans,
    Crp,
    Graph,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kmeans" => Ok(Method::Kmeans),
            "crp" => Ok(Method::Crp),
            "graph" => Ok(Method::Graph),
            other => Err(Error::Config(format!(
                "unknown method `{other}` (expected kmeans, crp or graph)"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Kmeans => "kmeans",
            Method::Crp => "crp",
            Method::Graph => "graph",
        })
    }
}

/// Sense selection mechanism used by `demo-select`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    Top,
    AvgLinear,
    #[default]
    AvgLogistic,
    AttTanh,
    AttBilinear,
}

impl Selection {
    pub const ALL: [Selection; 5] = [
        Selection::Top,
        Selection::AvgLinear,
        Selection::AvgLogistic,
        Selection::AttTanh,
        Selection::AttBilinear,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Selection::Top => "top",
            Selection::AvgLinear => "avg_linear",
            Selection::AvgLogistic => "avg_logistic",
            Selection::AttTanh => "att_tanh",
            Selection::AttBilinear => "att_bilinear",
        }
    }

    pub fn is_attention(self) -> bool {
        matches!(self, Selection::AttTanh | Selection::AttBilinear)
    }
}

impl FromStr for Selection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Selection::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown selection mode `{s}`")))
    }
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Settings shared by all pipeline commands, read from a TOML file.
///
/// Relative paths in the file are resolved against the file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub inventory: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    /// Falls back to the built-in English list.
    pub stopwords: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    /// Directory holding per-word-type models and `manifest.json`.
    pub models: Option<PathBuf>,
    /// Extra weighted sense-graph edges for the graph method.
    pub edges: Option<PathBuf>,

    pub method: Method,
    pub init_mode: InitMode,
    pub window: usize,
    pub min_cluster_size: usize,
    pub max_iters: usize,
    pub crp: CrpParams,
    pub pagerank: PageRankConfig,

    pub selection: Selection,
    pub max_senses: usize,
    pub monosemous_label: MonosemousLabel,
    pub pad_range: f64,
    pub word_dim: usize,
    pub attention_width: usize,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            inventory: None,
            embeddings: None,
            stopwords: None,
            corpus: None,
            models: None,
            edges: None,
            method: Method::Kmeans,
            init_mode: InitMode::Definitions,
            window: 8,
            min_cluster_size: DEFAULT_MIN_CLUSTER_SIZE,
            max_iters: 300,
            crp: CrpParams::default(),
            pagerank: PageRankConfig::default(),
            selection: Selection::default(),
            max_senses: DEFAULT_MAX_SENSES,
            monosemous_label: MonosemousLabel::Word,
            pad_range: 0.1,
            word_dim: 500,
            attention_width: 100,
            seed: 0,
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: PipelineConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut config = in_file(path, Self::from_toml(&read_to_string(path)?))?;
        if let Some(dir) = path.parent() {
            config.resolve_paths(dir);
        }
        Ok(config)
    }

    fn resolve_paths(&mut self, base: &Path) {
        for p in [
            &mut self.inventory,
            &mut self.embeddings,
            &mut self.stopwords,
            &mut self.corpus,
            &mut self.models,
            &mut self.edges,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        ContextSpec::new(self.window)?;
        if self.min_cluster_size == 0 {
            return Err(Error::Config("min_cluster_size must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        if self.max_senses == 0 {
            return Err(Error::Config("max_senses must be at least 1".into()));
        }
        if !(self.pad_range.is_finite() && self.pad_range >= 0.0) {
            return Err(Error::Config(format!(
                "pad_range must be non-negative, got {}",
                self.pad_range
            )));
        }
        if self.word_dim == 0 || self.attention_width == 0 {
            return Err(Error::Config(
                "word_dim and attention_width must be positive".into(),
            ));
        }
        self.crp.validate()?;
        self.pagerank.validate()
    }

    pub fn context_spec(&self) -> ContextSpec {
        ContextSpec::new(self.window).expect("window validated")
    }

    /// The path stored in `field`, or a configuration error naming it.
    pub fn require<'a>(&self, field: &'static str, value: &'a Option<PathBuf>) -> Result<&'a Path> {
        value.as_deref().ok_or_else(|| {
            Error::Config(format!(
                "no `{field}` path given (set it in the config file or by flag)"
            ))
        })
    }

    /// Name of this configuration in report rows.
    pub fn run_name(&self) -> String {
        match self.method {
            Method::Graph => "graph".to_string(),
            m => format!("{m}-{}", self.init_mode),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let c = PipelineConfig::from_toml("").unwrap();
        assert_eq!(c, PipelineConfig::default());
        assert_eq!(c.window, 8);
        assert_eq!(c.min_cluster_size, 10);

        let c = PipelineConfig::from_toml(
            r#"
            method = "crp"
            init_mode = "examples"
            selection = "att_tanh"
            window = 4
            [crp]
            gamma = 2.0
            "#,
        )
        .unwrap();
        assert_eq!(c.method, Method::Crp);
        assert_eq!(c.selection, Selection::AttTanh);
        assert_eq!(
            c.crp,
            CrpParams {
                gamma: 2.0,
                ..CrpParams::default()
            }
        );
        assert_eq!(c.run_name(), "crp-examples");
    }

    #[test]
    fn rejects_bad_values() {
        assert!(PipelineConfig::from_toml("window = 7").is_err());
        assert!(PipelineConfig::from_toml("method = \"lda\"").is_err());
        assert!(PipelineConfig::from_toml("colour = 1").is_err());
        assert!(PipelineConfig::from_toml("[pagerank]\ndamping = 1.5").is_err());
    }

    #[test]
    fn relative_paths_follow_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(
            &path,
            "inventory = \"inv.jsonl\"\nembeddings = \"/abs/vec.txt\"\n",
        )
        .unwrap();
        let c = PipelineConfig::load(&path).unwrap();
        assert_eq!(c.inventory.unwrap(), dir.path().join("inv.jsonl"));
        assert_eq!(c.embeddings.unwrap(), PathBuf::from("/abs/vec.txt"));
    }

    #[test]
    fn mode_names_round_trip() {
        for m in Selection::ALL {
            assert_eq!(m.as_str().parse::<Selection>().unwrap(), m);
        }
        for m in [Method::Kmeans, Method::Crp, Method::Graph] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
    }
}
