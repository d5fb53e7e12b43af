//! Parsers for command-line values.

use anyhow::{anyhow, bail, Context, Result};
use dsfft_core::CompressibilityModel;

/// Positive integer written plainly, with `_` separators, as `10^6` or as
/// `1e6`.
pub fn parse_count(s: &str) -> Result<u64> {
    let s = s.trim().replace('_', "");
    let value = if let Some((base, exp)) = s.split_once('^') {
        let base: u64 = base.parse().with_context(|| format!("bad base in `{s}`"))?;
        let exp: u32 = exp
            .parse()
            .with_context(|| format!("bad exponent in `{s}`"))?;
        base.checked_pow(exp)
            .ok_or_else(|| anyhow!("`{s}` overflows 64 bits"))?
    } else if let Some((mantissa, exp)) = s.split_once(['e', 'E']) {
        let mantissa: u64 = mantissa
            .parse()
            .with_context(|| format!("bad mantissa in `{s}`"))?;
        let exp: u32 = exp
            .parse()
            .with_context(|| format!("bad exponent in `{s}`"))?;
        10u64
            .checked_pow(exp)
            .and_then(|p| p.checked_mul(mantissa))
            .ok_or_else(|| anyhow!("`{s}` overflows 64 bits"))?
    } else {
        s.parse()
            .with_context(|| format!("`{s}` is not an integer"))?
    };
    if value == 0 {
        bail!("`{s}` must be positive");
    }
    Ok(value)
}

pub fn parse_count_list(s: &str) -> Result<Vec<u64>> {
    s.split(',').map(parse_count).collect()
}

/// `exact:B=2`, `algebraic:p=3,c=1` or `exponential:alpha=1,c=1`; `c`
/// defaults to 1.
pub fn parse_model(s: &str) -> Result<CompressibilityModel> {
    let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
    let mut pairs = Vec::new();
    for item in rest.split(',').filter(|x| !x.trim().is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| anyhow!("expected key=value, found `{item}`"))?;
        pairs.push((key.trim().to_ascii_lowercase(), value.trim().to_string()));
    }
    let mut take = |key: &str| -> Option<String> {
        let pos = pairs.iter().position(|(k, _)| k == key)?;
        Some(pairs.remove(pos).1)
    };
    let real = |key: &str, v: Option<String>| -> Result<Option<f64>> {
        v.map(|v| {
            v.parse::<f64>()
                .with_context(|| format!("{key}=`{v}` is not a number"))
        })
        .transpose()
    };

    let model = match kind.trim() {
        "exact" => {
            let b = take("b").ok_or_else(|| anyhow!("exact model needs B=<terms>"))?;
            let terms = b
                .parse()
                .with_context(|| format!("B=`{b}` is not an integer"))?;
            CompressibilityModel::ExactSparse { terms }
        }
        "algebraic" => {
            let p = real("p", take("p"))?
                .ok_or_else(|| anyhow!("algebraic model needs p=<exponent>"))?;
            let c = real("c", take("c"))?.unwrap_or(1.0);
            CompressibilityModel::Algebraic { p, c }
        }
        "exponential" => {
            let alpha = real("alpha", take("alpha"))?
                .ok_or_else(|| anyhow!("exponential model needs alpha=<rate>"))?;
            let c = real("c", take("c"))?.unwrap_or(1.0);
            CompressibilityModel::Exponential { alpha, c }
        }
        other => bail!("unknown model `{other}` (expected exact, algebraic or exponential)"),
    };
    if let Some((key, _)) = pairs.first() {
        bail!("unexpected parameter `{key}` for model `{}`", kind.trim());
    }
    model.validate().map_err(|e| anyhow!("{e}"))?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(parse_count("10^6").unwrap(), 1_000_000);
        assert_eq!(parse_count("1e9").unwrap(), 1_000_000_000);
        assert_eq!(parse_count("1_000").unwrap(), 1000);
        assert_eq!(
            parse_count_list("10^6,10^9,10^12").unwrap(),
            vec![1_000_000, 1_000_000_000, 1_000_000_000_000]
        );
        assert!(parse_count("0").is_err());
        assert!(parse_count("10^30").is_err());
        assert!(parse_count("ten").is_err());
    }

    #[test]
    fn models() {
        assert_eq!(
            parse_model("exact:B=2").unwrap(),
            CompressibilityModel::ExactSparse { terms: 2 }
        );
        assert_eq!(
            parse_model("algebraic:p=3,c=1").unwrap(),
            CompressibilityModel::Algebraic { p: 3.0, c: 1.0 }
        );
        assert_eq!(
            parse_model("exponential:alpha=0.5").unwrap(),
            CompressibilityModel::Exponential { alpha: 0.5, c: 1.0 }
        );
        assert!(parse_model("algebraic:p=1").is_err());
        assert!(parse_model("algebraic:p=3,q=2").is_err());
        assert!(parse_model("gaussian:s=1").is_err());
        assert!(parse_model("exact").is_err());
    }
}
