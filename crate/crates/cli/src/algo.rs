//! Selector tokens: `dpp`, `vs`, `lev-mult[:s=N]`, `length-sq[:s=N]`,
//! `largest-lev`, `threshold[:theta=T]`, `pivoted-qr`, `double-phase[:c=N]`,
//! `rejection-dpp[:theta=T]`.

use anyhow::{anyhow, bail, Result};
use cssdpp_core::SelectorKind;

/// Shared parameter defaults carried by the CLI flags.
pub struct AlgoDefaults {
    pub k: usize,
    /// `--theta`, used by `rejection-dpp`
    pub theta: f64,
    /// `--c`, used by `double-phase` (defaults to 10k)
    pub c: Option<usize>,
}

pub fn parse_algo(token: &str, defaults: &AlgoDefaults) -> Result<SelectorKind> {
    let (name, param) = match token.split_once(':') {
        Some((n, p)) => (n.trim(), Some(p.trim())),
        None => (token.trim(), None),
    };
    let param_value = |key: &str| -> Result<Option<f64>> {
        match param {
            None => Ok(None),
            Some(p) => {
                let (k, v) = p
                    .split_once('=')
                    .ok_or_else(|| anyhow!("parameter `{p}` must look like {key}=value"))?;
                if k.trim() != key {
                    bail!("`{name}` takes `{key}=`, not `{k}=`");
                }
                Ok(Some(v.trim().parse::<f64>()?))
            }
        }
    };
    let kind = match name {
        "dpp" => SelectorKind::ProjectionDpp,
        "vs" => SelectorKind::VolumeSampling,
        "lev-mult" => SelectorKind::LeverageMultinomial {
            s: param_value("s")?.map(|v| v as usize).unwrap_or(defaults.k),
        },
        "length-sq" => SelectorKind::LengthSquare {
            s: param_value("s")?.map(|v| v as usize).unwrap_or(defaults.k),
        },
        "largest-lev" => SelectorKind::LargestLeverage,
        "threshold" => SelectorKind::ThresholdSelect {
            theta: param_value("theta")?.unwrap_or(defaults.k as f64 - 0.5),
        },
        "pivoted-qr" => SelectorKind::PivotedQr,
        "double-phase" => SelectorKind::DoublePhase {
            c: param_value("c")?
                .map(|v| v as usize)
                .or(defaults.c)
                .unwrap_or(10 * defaults.k),
        },
        "rejection-dpp" => SelectorKind::RejectionDpp {
            theta: param_value("theta")?.unwrap_or(defaults.theta),
        },
        other => bail!(
            "unknown algorithm `{other}` (expected dpp, vs, lev-mult, length-sq, \
             largest-lev, threshold, pivoted-qr, double-phase, rejection-dpp)"
        ),
    };
    Ok(kind)
}

pub fn parse_algo_list(list: &str, defaults: &AlgoDefaults) -> Result<Vec<SelectorKind>> {
    list.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_algo(t, defaults))
        .collect()
}

/// Label carrying the effective parameters, used in result records.
pub fn algo_label(kind: &SelectorKind) -> String {
    match kind {
        SelectorKind::LeverageMultinomial { s } => format!("lev-mult:s={s}"),
        SelectorKind::LengthSquare { s } => format!("length-sq:s={s}"),
        SelectorKind::ThresholdSelect { theta } => format!("threshold:theta={theta}"),
        SelectorKind::DoublePhase { c } => format!("double-phase:c={c}"),
        SelectorKind::RejectionDpp { theta } => format!("rejection-dpp:theta={theta}"),
        other => other.name().to_string(),
    }
}
