//! Command-line frontend: every core operation behind a subcommand with
//! JSON in and JSON out.
//!
//! Inputs are JSON values passed inline, as a file path, or as `-` for
//! stdin. Output is a single `CommandResult` object on stdout; the exit
//! code is zero exactly when the status is `ok`. Every arbitrary-precision
//! value is a decimal string (rationals as `p/q`), so payloads round-trip
//! exactly.

use std::collections::BTreeMap;
use std::io::Read;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::avoidance::{
    find_point_outside, linear_forms_point, theorem_bound, AvoidanceInstance,
};
use crate::certificate::{height_of, BoundCertificate, NormKind};
use crate::counting::{
    count_box_image, count_length_ball, cube_count_envelope, BoxRegion, CountEnvelope, CubeRegion,
    RatMatrix, DEFAULT_ENUM_BUDGET,
};
use crate::error::{Error, Result};
use crate::interchange::{parse_bigint, parse_ratio};
use crate::lattice::{duality_certificate, Lattice, LinearForm};
use crate::plank::{check_plank_inequalities, minimal_cover_search, verify_cover, CoverInstance};
use crate::polysearch::{
    find_nonvanishing_grid, find_small_height_point, find_small_length_point, MultiPoly,
};

pub const USAGE: &str = "usage: heightscout <subcommand> [flags]\n\
subcommands:\n\
  height            --lattice <json>\n\
  grassmann         --lattice <json>\n\
  duality           --lattice <json>\n\
  count-cube        --lattice <json> (--cube <json> | --R <rational>)\n\
  count-box         --matrix <json> --box <json>\n\
  count-length-ball --N <int> --R <rational>\n\
  poly-search       --poly <json> [--norm height|length] [--grid <json array>]\n\
  avoid             --instance <json>\n\
  forms-avoid       --forms <json array>\n\
  plank-verify      --cover <json>\n\
  plank-min-cover   --N <int> --R <int> --cap <int>\n\
global flags: --budget <int> (or HEIGHTSCOUT_BUDGET), --verify\n\
JSON flag values may be inline, a file path, or '-' for stdin.";

/// Result of one CLI invocation: `status` is `ok` or `error`, `payload`
/// carries the command output, `diagnostics` is human-readable.
#[derive(Debug, Serialize)]
pub struct CommandResult {
    pub status: &'static str,
    pub payload: Value,
    pub diagnostics: String,
}

impl CommandResult {
    fn ok(payload: Value) -> Self {
        CommandResult {
            status: "ok",
            payload,
            diagnostics: String::new(),
        }
    }

    fn error(diagnostics: String) -> Self {
        CommandResult {
            status: "error",
            payload: Value::Null,
            diagnostics,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.status == "ok" {
            0
        } else {
            1
        }
    }
}

struct ParsedArgs {
    flags: BTreeMap<String, String>,
    verify: bool,
    budget: u64,
}

impl ParsedArgs {
    fn take(&mut self, name: &str) -> Result<String> {
        self.flags
            .remove(name)
            .ok_or_else(|| Error::Usage(format!("missing required flag --{name}")))
    }

    fn finish(self) -> Result<()> {
        if let Some(name) = self.flags.keys().next() {
            return Err(Error::Usage(format!("unexpected flag --{name}")));
        }
        Ok(())
    }
}

fn parse_flags(args: &[String]) -> Result<ParsedArgs> {
    let mut flags = BTreeMap::new();
    let mut verify = false;
    let mut budget: Option<u64> = None;
    let mut i = 0;
    while i < args.len() {
        let arg = &args[i];
        let Some(name) = arg.strip_prefix("--") else {
            return Err(Error::Usage(format!("expected a flag, got {arg:?}")));
        };
        if name == "verify" {
            verify = true;
            i += 1;
            continue;
        }
        let value = args
            .get(i + 1)
            .ok_or_else(|| Error::Usage(format!("flag --{name} needs a value")))?;
        if name == "budget" {
            budget = Some(
                value
                    .parse()
                    .map_err(|_| Error::Usage(format!("invalid budget {value:?}")))?,
            );
        } else if flags.insert(name.to_string(), value.clone()).is_some() {
            return Err(Error::Usage(format!("flag --{name} given twice")));
        }
        i += 2;
    }
    let budget = budget.or_else(env_budget).unwrap_or(DEFAULT_ENUM_BUDGET);
    Ok(ParsedArgs {
        flags,
        verify,
        budget,
    })
}

fn env_budget() -> Option<u64> {
    std::env::var("HEIGHTSCOUT_BUDGET").ok()?.parse().ok()
}

/// A flag value is inline JSON when it looks like one, `-` for stdin,
/// otherwise a file path.
fn load_json_text(value: &str) -> Result<String> {
    let trimmed = value.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') || trimmed.starts_with('"') {
        return Ok(value.to_string());
    }
    if value == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Io(format!("reading stdin: {e}")))?;
        return Ok(buf);
    }
    std::fs::read_to_string(value).map_err(|e| Error::Io(format!("reading {value:?}: {e}")))
}

fn parse_input<T: serde::de::DeserializeOwned>(value: &str) -> Result<T> {
    let text = load_json_text(value)?;
    serde_json::from_str(&text).map_err(|e| Error::Json(e.to_string()))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payload serialization cannot fail")
}

/// Dispatches one invocation. The first argument is the subcommand.
pub fn run(args: &[String]) -> CommandResult {
    let Some((sub, rest)) = args.split_first() else {
        return CommandResult::error(format!("no subcommand given\n{USAGE}"));
    };
    let parsed = match parse_flags(rest) {
        Ok(p) => p,
        Err(e) => return CommandResult::error(e.to_string()),
    };
    match dispatch(sub, parsed) {
        Ok(payload) => CommandResult::ok(payload),
        Err(e) => CommandResult::error(e.to_string()),
    }
}

fn dispatch(sub: &str, mut args: ParsedArgs) -> Result<Value> {
    let verify = args.verify;
    let budget = args.budget;
    match sub {
        "height" => {
            let lat: Lattice = parse_input(&args.take("lattice")?)?;
            args.finish()?;
            let height = lat.height();
            if verify {
                verify_height(&lat, &height)?;
            }
            Ok(json!({ "height": height.to_string() }))
        }
        "grassmann" => {
            let lat: Lattice = parse_input(&args.take("lattice")?)?;
            args.finish()?;
            let coords: Vec<String> = lat.grassmann().iter().map(|v| v.to_string()).collect();
            Ok(json!({ "grassmann": coords }))
        }
        "duality" => {
            let lat: Lattice = parse_input(&args.take("lattice")?)?;
            args.finish()?;
            let cert = duality_certificate(&lat)?;
            if verify && !cert.verified {
                return Err(Error::Internal("duality certificate unverified".into()));
            }
            Ok(to_value(&cert))
        }
        "count-cube" => {
            let lat: Lattice = parse_input(&args.take("lattice")?)?;
            let cube = if let Ok(raw) = args.take("cube") {
                parse_input::<CubeRegion>(&raw)?
            } else {
                let r = parse_ratio(&args.take("R")?)?;
                CubeRegion::new(r, vec![BigRational::zero(); lat.ambient_dim()])?
            };
            args.finish()?;
            let env = cube_count_envelope(&lat, &cube, budget)?;
            if verify {
                verify_envelope(&env)?;
            }
            Ok(to_value(&env))
        }
        "count-box" => {
            let matrix: RatMatrix = parse_input(&args.take("matrix")?)?;
            let region: BoxRegion = parse_input(&args.take("box")?)?;
            args.finish()?;
            let env = count_box_image(&matrix, &region, budget)?;
            if verify {
                verify_envelope(&env)?;
            }
            Ok(to_value(&env))
        }
        "count-length-ball" => {
            let n: usize = args
                .take("N")?
                .parse()
                .map_err(|_| Error::Usage("--N must be a positive integer".into()))?;
            if n == 0 {
                return Err(Error::Usage("--N must be a positive integer".into()));
            }
            let r = parse_ratio(&args.take("R")?)?;
            args.finish()?;
            let count = count_length_ball(n, &r);
            if verify {
                verify_length_ball(n, &r, &count, budget)?;
            }
            Ok(json!({ "count": count.to_string() }))
        }
        "poly-search" => {
            let poly: MultiPoly = parse_input(&args.take("poly")?)?;
            let grid = args.flags.remove("grid");
            let norm = args.flags.remove("norm");
            args.finish()?;
            if let Some(grid_raw) = grid {
                if norm.is_some() {
                    return Err(Error::Usage("--grid and --norm are exclusive".into()));
                }
                let grid = parse_grid(&grid_raw)?;
                let hit = find_nonvanishing_grid(&poly, &grid)?;
                if verify {
                    if let Some(x) = &hit {
                        verify_nonvanishing(&poly, x)?;
                    }
                }
                return Ok(match hit {
                    Some(x) => json!({
                        "point": x.iter().map(|v| v.to_string()).collect::<Vec<_>>()
                    }),
                    None => json!({ "point": Value::Null }),
                });
            }
            let cert = match norm.as_deref() {
                None | Some("height") => find_small_height_point(&poly)?,
                Some("length") => find_small_length_point(&poly)?,
                Some(other) => {
                    return Err(Error::Usage(format!(
                        "--norm must be height or length, got {other:?}"
                    )))
                }
            };
            if verify {
                verify_poly_certificate(&poly, &cert)?;
            }
            Ok(to_value(&cert))
        }
        "avoid" => {
            let inst: AvoidanceInstance = parse_input(&args.take("instance")?)?;
            args.finish()?;
            let cert = find_point_outside(&inst, budget)?;
            if verify {
                verify_avoid_certificate(&inst, &cert)?;
            }
            Ok(to_value(&cert))
        }
        "forms-avoid" => {
            let forms: Vec<LinearForm> = parse_input(&args.take("forms")?)?;
            args.finish()?;
            let cert = linear_forms_point(&forms, budget)?;
            if verify {
                verify_forms_certificate(&forms, &cert)?;
            }
            Ok(to_value(&cert))
        }
        "plank-verify" => {
            let cover: CoverInstance = parse_input(&args.take("cover")?)?;
            args.finish()?;
            let check = verify_cover(&cover, budget)?;
            if verify {
                if let Some(w) = &check.witness {
                    verify_uncovered(&cover, w)?;
                }
            }
            Ok(to_value(&check))
        }
        "plank-min-cover" => {
            let n: usize = args
                .take("N")?
                .parse()
                .map_err(|_| Error::Usage("--N must be an integer >= 2".into()))?;
            let r: u64 = args
                .take("R")?
                .parse()
                .map_err(|_| Error::Usage("--R must be a positive integer".into()))?;
            let cap: u64 = args
                .take("cap")?
                .parse()
                .map_err(|_| Error::Usage("--cap must be a nonnegative integer".into()))?;
            args.finish()?;
            let min = minimal_cover_search(n, r, cap, budget)?;
            if verify && !verify_cover(&min.instance, budget)?.covered {
                return Err(Error::Internal("minimal cover fails re-verification".into()));
            }
            let report = check_plank_inequalities(&min.instance, budget)?;
            Ok(json!({
                "m_min": min.instance.forms().len(),
                "pool_size": min.pool_size,
                "pool_complete": min.pool_complete,
                "cover": to_value(&min.instance),
                "report": to_value(&report),
            }))
        }
        other => Err(Error::Usage(format!(
            "unknown subcommand {other:?}\n{USAGE}"
        ))),
    }
}

fn parse_grid(raw: &str) -> Result<Vec<BigInt>> {
    let text = load_json_text(raw)?;
    let values: Vec<Value> =
        serde_json::from_str(&text).map_err(|e| Error::Json(e.to_string()))?;
    values
        .iter()
        .map(|v| match v {
            Value::String(s) => parse_bigint(s),
            Value::Number(n) => parse_bigint(&n.to_string()),
            other => Err(Error::Json(format!("grid entry {other} is not an integer"))),
        })
        .collect()
}

fn verify_height(lat: &Lattice, height: &BigInt) -> Result<()> {
    use num_traits::Signed;
    let max = lat
        .grassmann()
        .iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(BigInt::zero);
    if &max != height || height.is_zero() {
        return Err(Error::Internal("height re-check failed".into()));
    }
    Ok(())
}

fn verify_envelope(env: &CountEnvelope) -> Result<()> {
    if !env.is_sound() {
        return Err(Error::Internal(
            "count envelope violates its own bounds".into(),
        ));
    }
    Ok(())
}

fn verify_length_ball(n: usize, r: &BigRational, count: &BigInt, budget: u64) -> Result<()> {
    use num_traits::One;
    use num_traits::Signed;
    if r.is_negative() {
        return Ok(());
    }
    let rf = r.floor().to_integer();
    let width = BigInt::from(2) * &rf + BigInt::one();
    if width.pow(n as u32) > BigInt::from(budget) {
        return Ok(()); // brute-force re-check does not fit the budget
    }
    let mut brute = BigInt::zero();
    let bound = i64::try_from(&rf).map_err(|_| Error::Internal("radius too large".into()))?;
    let mut x = vec![-bound; n];
    loop {
        let l: i64 = x.iter().map(|v| v.abs()).sum();
        if BigInt::from(l) <= rf {
            brute += BigInt::one();
        }
        let mut k = 0;
        loop {
            if k == n {
                if &brute == count {
                    return Ok(());
                }
                return Err(Error::Internal(format!(
                    "length-ball formula {count} disagrees with enumeration {brute}"
                )));
            }
            x[k] += 1;
            if x[k] <= bound {
                break;
            }
            x[k] = -bound;
            k += 1;
        }
    }
}

fn verify_nonvanishing(poly: &MultiPoly, x: &[BigInt]) -> Result<()> {
    if poly.evaluate(x)?.is_zero() {
        return Err(Error::Internal("returned point vanishes on re-check".into()));
    }
    Ok(())
}

fn verify_poly_certificate(poly: &MultiPoly, cert: &BoundCertificate) -> Result<()> {
    verify_nonvanishing(poly, &cert.point)?;
    if !cert.bound_satisfied() {
        return Err(Error::Internal("certificate exceeds its bound".into()));
    }
    if cert.norm == NormKind::Height
        && cert.case_fired.is_none()
        && cert.point.iter().any(|v| v.is_zero())
    {
        return Err(Error::Internal(
            "height certificate has a zero coordinate outside the basis-vector case".into(),
        ));
    }
    Ok(())
}

fn verify_avoid_certificate(inst: &AvoidanceInstance, cert: &BoundCertificate) -> Result<()> {
    if !inst.omega().contains(&cert.point)? {
        return Err(Error::Internal("point left the ambient lattice".into()));
    }
    for (i, lam) in inst.obstacles().iter().enumerate() {
        if lam.contains(&cert.point)? {
            return Err(Error::Internal(format!(
                "point lies inside obstacle {i} on re-check"
            )));
        }
    }
    if height_of(&cert.point) != cert.found || !cert.bound_satisfied() {
        return Err(Error::Internal("certificate bound re-check failed".into()));
    }
    let _ = theorem_bound(inst);
    Ok(())
}

fn verify_forms_certificate(forms: &[LinearForm], cert: &BoundCertificate) -> Result<()> {
    for f in forms {
        if f.evaluate(&cert.point)?.is_zero() {
            return Err(Error::Internal("a form vanishes at the point".into()));
        }
    }
    if !cert.bound_satisfied() {
        return Err(Error::Internal("certificate exceeds its bound".into()));
    }
    Ok(())
}

fn verify_uncovered(cover: &CoverInstance, witness: &[BigInt]) -> Result<()> {
    for f in cover.forms() {
        if f.evaluate(witness)?.is_zero() {
            return Err(Error::Internal("witness is covered on re-check".into()));
        }
    }
    Ok(())
}

/// Entry point used by the binary: runs on `std::env::args`, prints the
/// result JSON on stdout, returns the exit code.
pub fn main_entry() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let result = run(&args);
    println!(
        "{}",
        serde_json::to_string(&result).expect("result serialization cannot fail")
    );
    result.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CommandResult {
        let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        run(&owned)
    }

    #[test]
    fn height_subcommand_matches_interchange() {
        let res = run_args(&[
            "height",
            "--lattice",
            r#"{"ambient":2,"basis":{"rows":2,"cols":1,"data":[["0"],["2"]]}}"#,
        ]);
        assert_eq!(res.status, "ok");
        assert_eq!(res.exit_code(), 0);
        assert_eq!(res.payload["height"], "2");
    }

    #[test]
    fn unknown_subcommand_is_an_error() {
        let res = run_args(&["frobnicate"]);
        assert_eq!(res.status, "error");
        assert_eq!(res.exit_code(), 1);
        assert!(res.diagnostics.contains("unknown subcommand"));
    }

    #[test]
    fn missing_flag_is_reported() {
        let res = run_args(&["height"]);
        assert_eq!(res.status, "error");
        assert!(res.diagnostics.contains("--lattice"));
    }

    #[test]
    fn schema_violation_is_reported() {
        let res = run_args(&["height", "--lattice", r#"{"ambient":2}"#]);
        assert_eq!(res.status, "error");
        assert!(res.diagnostics.contains("json"));
    }

    #[test]
    fn unexpected_and_duplicate_flags_are_rejected() {
        let res = run_args(&[
            "count-length-ball",
            "--N",
            "2",
            "--R",
            "1",
            "--bogus",
            "x",
        ]);
        assert_eq!(res.status, "error");
        assert!(res.diagnostics.contains("--bogus"));

        let res = run_args(&["count-length-ball", "--N", "2", "--N", "3", "--R", "1"]);
        assert_eq!(res.status, "error");
        assert!(res.diagnostics.contains("twice"));
    }

    #[test]
    fn grid_and_norm_are_exclusive() {
        let res = run_args(&[
            "poly-search",
            "--poly",
            r#"{"vars":1,"terms":[{"exp":[1],"coeff":"1"}]}"#,
            "--norm",
            "height",
            "--grid",
            "[0,1]",
        ]);
        assert_eq!(res.status, "error");
        assert!(res.diagnostics.contains("exclusive"));
    }
}
