use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use cdgame_core::gadgets::{GadgetKind, GadgetSpec};
use cdgame_core::reduction::{Reduction, Variant};
use cdgame_core::{Formula, Graph};
use clap::Args;

/// Where a graph comes from. Exactly one of the four sources is required.
#[derive(Args, Debug, Clone)]
pub struct GraphSource {
    /// Graph file, text (`n`/`v`/`e` lines) or JSON
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Gadget kind h|b|c|a, followed by the size for h and c
    #[arg(long, num_args = 1..=2, value_names = ["KIND", "PARAM"])]
    pub gadget: Option<Vec<String>>,
    #[command(flatten)]
    pub formula: FormulaSource,
    /// Reduction variant: d builds G_F, s builds G'_F
    #[arg(long, default_value = "d")]
    pub variant: Variant,
    /// Override the size of the H copy in a reduction
    #[arg(long)]
    pub h_size: Option<usize>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct FormulaSource {
    /// Formula file: one clause of variable indices per line
    #[arg(long, value_name = "FILE")]
    pub formula: Option<PathBuf>,
    /// Formula inline, clauses separated by `/` (e.g. "1 3/2 3 5/4 5")
    #[arg(long, value_name = "CLAUSES", conflicts_with = "formula")]
    pub cnf: Option<String>,
}

impl FormulaSource {
    pub fn given(&self) -> bool {
        self.formula.is_some() || self.cnf.is_some()
    }

    /// The formula text with one clause per line.
    pub fn text(&self) -> Result<String> {
        match (&self.formula, &self.cnf) {
            (Some(path), _) => std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())),
            (None, Some(inline)) => Ok(inline.replace(['/', ';'], "\n")),
            (None, None) => bail!("no formula given (use --formula FILE or --cnf CLAUSES)"),
        }
    }

    pub fn load(&self) -> Result<Formula> {
        Ok(self.text()?.parse::<Formula>()?)
    }
}

pub fn gadget_spec(words: &[String]) -> Result<GadgetSpec> {
    let kind: GadgetKind = words[0].parse().map_err(anyhow::Error::msg)?;
    let param = match words.get(1) {
        Some(p) => Some(p.parse::<usize>().with_context(|| format!("bad gadget size `{p}`"))?),
        None => None,
    };
    Ok(GadgetSpec::new(kind, param))
}

impl GraphSource {
    pub fn load(&self) -> Result<Arc<Graph>> {
        let count = [self.graph.is_some(), self.gadget.is_some(), self.formula.given()].iter().filter(|&&b| b).count();
        if count != 1 {
            bail!("give exactly one of --graph, --gadget, --formula/--cnf");
        }
        if let Some(path) = &self.graph {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let g = Graph::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
            return Ok(Arc::new(g));
        }
        if let Some(words) = &self.gadget {
            let g = gadget_spec(words)?.build()?;
            return Ok(Arc::new(g));
        }
        let red = Reduction::build(&self.formula.load()?, self.variant, self.h_size)?;
        Ok(red.graph)
    }
}
