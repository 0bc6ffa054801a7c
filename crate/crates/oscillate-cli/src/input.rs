//! Input loading: sampled functions from CSV/JSON files or from generator
//! specs of the form `kind:key=val,key=val`.

use std::path::Path;

use oscillate::grid::{io, Domain1d, Generator, GridFunction, TrigMode};
use oscillate::rng::SplitMix64;
use oscillate::{Error, Result};

/// Parsed generator spec plus the domain overrides.
pub struct GenSpec {
    pub generator: Option<Generator>,
    /// `random` draws values from the run seed instead of a formula.
    pub random: bool,
    pub domain: Option<Domain1d>,
}

/// Accepted kinds: `constant:c=..`, `step:at=..`, `sawtooth:k=..`,
/// `trig:k=1,amp=1,sin=0,k=3,...`, `log:x0=..`,
/// `weierstrass:a=..,b=..,terms=..`, `random`. Domain overrides use
/// `lo=`/`hi=`/`torus=`.
pub fn parse_gen_spec(spec: &str) -> Result<GenSpec> {
    let (kind, rest) = match spec.split_once(':') {
        Some((k, r)) => (k.trim(), r),
        None => (spec.trim(), ""),
    };
    let mut pairs: Vec<(String, String)> = Vec::new();
    for part in rest.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=val, got `{part}`")))?;
        pairs.push((key.trim().to_string(), val.trim().to_string()));
    }

    let get = |name: &str| -> Option<&str> {
        pairs
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    };
    let parse_f64 = |name: &str, default: f64| -> Result<f64> {
        match get(name) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Parse(format!("bad number for `{name}`: `{v}`"))),
        }
    };

    let mut domain = None;
    if let (Some(lo), Some(hi)) = (get("lo"), get("hi")) {
        let a: f64 = lo
            .parse()
            .map_err(|_| Error::Parse(format!("bad number for `lo`: `{lo}`")))?;
        let b: f64 = hi
            .parse()
            .map_err(|_| Error::Parse(format!("bad number for `hi`: `{hi}`")))?;
        domain = Some(Domain1d::Interval { a, b });
    }
    if get("torus") == Some("1") || get("torus") == Some("true") {
        domain = Some(Domain1d::Torus);
    }

    let generator = match kind {
        "constant" => Some(Generator::Constant {
            c: parse_f64("c", 1.0)?,
        }),
        "step" => Some(Generator::Step {
            at: parse_f64("at", 0.5)?,
        }),
        "sawtooth" => Some(Generator::Sawtooth {
            k: parse_f64("k", 1.0)? as u32,
        }),
        "trig" => {
            let mut modes: Vec<TrigMode> = Vec::new();
            for (key, val) in &pairs {
                match key.as_str() {
                    "k" => {
                        let k: u32 = val
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad frequency `{val}`")))?;
                        modes.push(TrigMode {
                            k,
                            amp: 1.0,
                            sin: false,
                        });
                    }
                    "amp" => {
                        let amp: f64 = val
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad amplitude `{val}`")))?;
                        let last = modes
                            .last_mut()
                            .ok_or_else(|| Error::Parse("amp= before any k=".into()))?;
                        last.amp = amp;
                    }
                    "sin" => {
                        let last = modes
                            .last_mut()
                            .ok_or_else(|| Error::Parse("sin= before any k=".into()))?;
                        last.sin = val == "1" || val == "true";
                    }
                    "lo" | "hi" | "torus" => {}
                    other => return Err(Error::Parse(format!("unknown trig key `{other}`"))),
                }
            }
            if modes.is_empty() {
                modes.push(TrigMode {
                    k: 1,
                    amp: 1.0,
                    sin: false,
                });
            }
            Some(Generator::Trig { modes })
        }
        "log" | "log_singularity" => Some(Generator::LogSingularity {
            x0: parse_f64("x0", 0.5)?,
        }),
        "weierstrass" => Some(Generator::Weierstrass {
            a: parse_f64("a", 0.5)?,
            b: parse_f64("b", 2.0)?,
            terms: parse_f64("terms", 25.0)? as u32,
        }),
        "random" => None,
        other => return Err(Error::Parse(format!("unknown generator kind `{other}`"))),
    };

    Ok(GenSpec {
        random: kind == "random",
        generator,
        domain,
    })
}

/// Realizes a spec at size `n`; `random` kinds pull from `seed`.
pub fn realize(spec: &GenSpec, n: usize, seed: u64) -> Result<GridFunction> {
    if spec.random {
        let mut rng = SplitMix64::new(seed);
        let values = rng.uniform_values(n, -1.0, 1.0);
        return match spec.domain {
            Some(Domain1d::Torus) => GridFunction::new_torus(values),
            Some(Domain1d::Interval { a, b }) => GridFunction::new_1d(a, b, values),
            None => GridFunction::new_1d(0.0, 1.0, values),
        };
    }
    let generator = spec.generator.as_ref().expect("non-random spec");
    let domain = spec.domain.unwrap_or_else(|| generator.default_domain());
    generator.sample(n, domain)
}

/// Loads a function from a CSV or JSON file (by extension, JSON on `.json`).
pub fn load_file(path: &Path) -> Result<GridFunction> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().and_then(|e| e.to_str()) == Some("json") {
        io::parse_json(&text)
    } else {
        io::parse_csv(&text)
    }
}
