//! Resolves command inputs from flags, falling back to the config file.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use coconvex::approx::{DeviationKind, ModulusChoice};
use coconvex::domainsep::JacksonConfig;
use coconvex::funcexpr::{parse_expr, parse_piecewise};
use coconvex::smoothness::ModulusSpec;
use coconvex::{Interval, PiecewiseFn, Polynomial, YPartition};

use crate::args::{InputArgs, JacksonFlags, ModeArg, ModulusFlags};
use crate::config::Config;
use crate::error::CliError;

pub struct Inputs {
    args: InputArgs,
    config: Config,
}

impl Inputs {
    pub fn new(args: &InputArgs) -> Result<Self, CliError> {
        let config = match &args.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        Ok(Inputs {
            args: args.clone(),
            config,
        })
    }

    /// The flag value if given, else the config entry.
    pub fn raw(&self, flag: Option<&str>, key: &str) -> Option<String> {
        flag.map(str::to_owned).or_else(|| self.config.get(key).map(str::to_owned))
    }

    pub fn number<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.config
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| CliError::Usage(format!("`{key}`: cannot parse {v:?}")))
            })
            .transpose()
    }

    pub fn required<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, CliError> {
        self.number(flag, key)?.ok_or_else(|| CliError::missing(key))
    }

    pub fn poly(&self) -> Result<Option<Polynomial>, CliError> {
        self.raw(self.args.poly.as_deref(), "poly")
            .map(|s| parse_polynomial(&s, "poly"))
            .transpose()
    }

    pub fn require_poly(&self) -> Result<Polynomial, CliError> {
        self.poly()?.ok_or_else(|| CliError::missing("poly"))
    }

    /// The `--fn` file, or the `fn` config entry.
    pub fn function(&self) -> Result<Option<PiecewiseFn>, CliError> {
        self.piecewise(self.args.fn_file.as_deref(), "fn")
    }

    pub fn piecewise(&self, file: Option<&Path>, key: &str) -> Result<Option<PiecewiseFn>, CliError> {
        let text = match file {
            Some(path) => Some(fs::read_to_string(path).map_err(|e| CliError::io(path, e))?),
            None => self.config.function_text(key)?,
        };
        Ok(text.map(|t| parse_piecewise(&t)).transpose()?)
    }

    pub fn require_function(&self) -> Result<PiecewiseFn, CliError> {
        self.function()?.ok_or_else(|| CliError::missing("fn"))
    }

    pub fn interval(&self, flag: Option<&str>, key: &str) -> Result<Option<Interval>, CliError> {
        self.raw(flag, key).map(|s| parse_interval(&s, key)).transpose()
    }

    pub fn domain(&self) -> Result<Option<Interval>, CliError> {
        self.interval(self.args.domain.as_deref(), "domain")
    }

    /// The domain, else the function's own domain.
    pub fn domain_or(&self, f: &PiecewiseFn) -> Result<Interval, CliError> {
        Ok(self.domain()?.unwrap_or(f.domain()))
    }

    pub fn require_domain(&self) -> Result<Interval, CliError> {
        self.domain()?.ok_or_else(|| CliError::missing("domain"))
    }

    pub fn partition(&self, flag: Option<&str>, iv: Interval) -> Result<YPartition, CliError> {
        match self.raw(flag, "y") {
            Some(list) => Ok(YPartition::new(parse_list(&list, "y")?, iv)?),
            None => Ok(YPartition::empty(iv)),
        }
    }

    pub fn modulus_spec(&self, m: &ModulusFlags, iv: Interval) -> Result<ModulusSpec, CliError> {
        self.modulus_spec_with(m, iv, None)
    }

    fn modulus_spec_with(&self, m: &ModulusFlags, iv: Interval, kr: Option<u32>) -> Result<ModulusSpec, CliError> {
        let k = match kr {
            Some(d) => self.number(m.k, "k")?.unwrap_or(d),
            None => self.required(m.k, "k")?,
        };
        let r = match kr {
            Some(d) => self.number(m.r, "r")?.unwrap_or(d),
            None => self.required(m.r, "r")?,
        };
        let t = self.required(m.t, "t")?;
        let mode = match m.mode {
            Some(mode) => mode,
            None => match self.config.get("mode") {
                None | Some("standard") => ModeArg::Standard,
                Some("replication") => ModeArg::Replication,
                Some(other) => return Err(CliError::Usage(format!("`mode`: unknown mode {other:?}"))),
            },
        };
        Ok(match mode {
            ModeArg::Standard => ModulusSpec::standard(k, r, t)?,
            ModeArg::Replication => ModulusSpec::replication(k, r, t, iv, self.required(m.h, "h")?)?,
        })
    }

    /// Jackson inputs; `default_kr` fills in k and r when neither flag nor config has them.
    pub fn jackson(
        &self,
        j: &JacksonFlags,
        p: &Polynomial,
        iv: Interval,
        default_kr: Option<u32>,
    ) -> Result<JacksonConfig, CliError> {
        let n = match self.number(j.n, "n")? {
            Some(n) => n,
            None => p.degree().map_or(1, |d| d + 1),
        };
        let modulus = match self.number(j.quoted_delta, "quoted_delta")? {
            Some(delta) => ModulusChoice::QuotedDelta { delta, interval: iv },
            None => ModulusChoice::Computed(self.modulus_spec_with(&j.modulus, iv, default_kr)?),
        };
        let deviation = match self.number(j.x0, "x0")? {
            Some(x0) => DeviationKind::Pointwise(x0),
            None => DeviationKind::Sup(iv),
        };
        Ok(JacksonConfig {
            n,
            modulus,
            deviation,
            claimed_c: self.number(j.claimed_c, "claimed_c")?,
        })
    }

    /// The second derivative for the modulus; the target itself when absent.
    pub fn second_derivative(&self, j: &JacksonFlags, f: &PiecewiseFn) -> Result<PiecewiseFn, CliError> {
        Ok(self.piecewise(j.f2.as_deref(), "f2")?.unwrap_or_else(|| f.clone()))
    }
}

pub fn parse_polynomial(text: &str, what: &str) -> Result<Polynomial, CliError> {
    let expr = parse_expr(text).map_err(|source| CliError::Parse {
        what: what.to_owned(),
        source,
    })?;
    Ok(expr.to_polynomial()?)
}

/// `[a, b]` or `a, b`.
pub fn parse_interval(text: &str, what: &str) -> Result<Interval, CliError> {
    let inner = text.trim();
    let inner = inner
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(inner);
    let bad = || CliError::Usage(format!("`{what}`: expected an interval like [-3, 3], got {text:?}"));
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    let a = a.trim().parse::<f64>().map_err(|_| bad())?;
    let b = b.trim().parse::<f64>().map_err(|_| bad())?;
    Ok(Interval::new(a, b)?)
}

pub fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let inner = text.trim();
    let inner = inner
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(inner);
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("`{what}`: cannot parse {s:?}")))
        })
        .collect()
}
