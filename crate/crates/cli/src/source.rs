//! Board, system and pattern arguments shared by the subcommands.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use mbgame::building::Pattern;
use mbgame::experiments::GameFamily;
use mbgame::linear::{ap_system, LinearSystem};
use mbgame::Hypergraph;

/// `sidon`, `schur`, `ap:<k>` or a JSON file with `{"a": [[..]], "b": [..]}`.
pub fn load_system(name: &str) -> Result<LinearSystem> {
    match name {
        "sidon" => Ok(LinearSystem::sidon()),
        "schur" => Ok(LinearSystem::schur()),
        _ => {
            if let Some(k) = name.strip_prefix("ap:") {
                return Ok(ap_system(k.parse().context("bad progression length")?)?);
            }
            let text = std::fs::read_to_string(name).with_context(|| format!("reading {name}"))?;
            Ok(LinearSystem::from_json(&text)?)
        }
    }
}

/// `triangle`, `complete:<r>:<v>` or a pattern text file.
pub fn load_pattern(name: &str) -> Result<Pattern> {
    if name == "triangle" {
        return Ok(Pattern::triangle());
    }
    if let Some(rest) = name.strip_prefix("complete:") {
        let (r, v) = rest.split_once(':').context("expected complete:<r>:<v>")?;
        return Ok(Pattern::complete(r.parse()?, v.parse()?)?);
    }
    let text = std::fs::read_to_string(name).with_context(|| format!("reading {name}"))?;
    Ok(Pattern::from_text(&text)?)
}

pub fn load_board(path: &Path) -> Result<Hypergraph> {
    Hypergraph::read_file(path).with_context(|| format!("reading board {}", path.display()))
}

/// Exactly one board source; the generated families also need `--n`.
#[derive(Args, Debug, Clone, Default)]
pub struct BoardArgs {
    /// board text file
    #[arg(long, group = "source")]
    pub board: Option<PathBuf>,
    /// k-term arithmetic progressions in [n]
    #[arg(long, group = "source", value_name = "K")]
    pub progression: Option<usize>,
    /// solutions of a linear system (file, `sidon`, `schur` or `ap:<k>`)
    #[arg(long, group = "source", value_name = "SYSTEM")]
    pub system: Option<String>,
    /// copies of a pattern (file, `triangle` or `complete:<r>:<v>`)
    #[arg(long, group = "source", value_name = "PATTERN")]
    pub pattern: Option<String>,
    /// keep non-degenerate solutions as well as proper ones
    #[arg(long, requires = "system")]
    pub nondegenerate: bool,
}

impl BoardArgs {
    pub fn is_set(&self) -> bool {
        self.board.is_some() || self.progression.is_some() || self.system.is_some() || self.pattern.is_some()
    }

    pub fn family(&self) -> Result<GameFamily> {
        Ok(if let Some(path) = &self.board {
            GameFamily::Board(load_board(path)?)
        } else if let Some(k) = self.progression {
            GameFamily::Progression(k)
        } else if let Some(s) = &self.system {
            GameFamily::System {
                sys: load_system(s)?,
                nondegenerate: self.nondegenerate,
            }
        } else if let Some(p) = &self.pattern {
            GameFamily::Pattern(load_pattern(p)?)
        } else {
            bail!("give one of --board, --progression, --system or --pattern")
        })
    }

    pub fn board(&self, n: Option<usize>) -> Result<(Hypergraph, GameFamily)> {
        let family = self.family()?;
        let board = match (&family, n) {
            (GameFamily::Board(h), _) => h.clone(),
            (_, Some(n)) => family.board(n)?,
            (_, None) => bail!("--n is required for a generated board"),
        };
        Ok((board, family))
    }
}
