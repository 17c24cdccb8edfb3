use std::path::Path;

use rotlab_core::abelian::DEFAULT_DEPTH;
use rotlab_core::rational::{self, Rational};
use rotlab_core::{
    CirclePoint, GroupPoint, MapSpec, ProfiniteInt, SolenoidPoint, TorusPoint, Vec2,
};

use crate::args::GroupArg;
use crate::output::{CliError, CliResult};

/// Reads `--map` as inline JSON (leading `{`) or as a file path.
pub fn load_map(arg: Option<&str>, depth: Option<u32>) -> CliResult<MapSpec> {
    let arg = arg.ok_or_else(|| CliError::Usage("this command needs --map".into()))?;
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg))?
    };
    let mut spec = MapSpec::from_json(&text)?;
    if let (MapSpec::Solenoid { depth: d, .. }, Some(k)) = (&mut spec, depth) {
        *d = k;
    }
    Ok(spec)
}

/// `a/b` or an integer (exact), or a float.
pub fn scalar(s: &str) -> CliResult<(f64, Option<Rational>)> {
    let s = s.trim();
    if s.contains('/') {
        let q = rational::parse_rational(s)?;
        return Ok((rational::to_f64(&q), Some(q)));
    }
    if let Ok(k) = s.parse::<i64>() {
        return Ok((k as f64, Some(Rational::from_integer(k))));
    }
    let x: f64 = s
        .parse()
        .map_err(|_| CliError::Usage(format!("not a number: {s:?}")))?;
    if !x.is_finite() {
        return Err(CliError::Usage(format!("not a finite number: {s:?}")));
    }
    Ok((x, None))
}

pub fn circle_point(s: &str) -> CliResult<CirclePoint> {
    Ok(match scalar(s)? {
        (_, Some(q)) => CirclePoint::from_rational(q),
        (x, None) => CirclePoint::new(x),
    })
}

pub fn torus_point(s: &str) -> CliResult<TorusPoint> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [a, b] => Ok(TorusPoint([circle_point(a)?, circle_point(b)?])),
        [a] => {
            let c = circle_point(a)?;
            Ok(TorusPoint([c, c]))
        }
        _ => Err(CliError::Usage(format!("expected x,y but got {s:?}"))),
    }
}

pub fn vec2(s: &str) -> CliResult<Vec2> {
    let p: Vec<f64> = s
        .split(',')
        .map(|c| scalar(c).map(|v| v.0))
        .collect::<CliResult<_>>()?;
    match p.as_slice() {
        [a, b] => Ok(Vec2([*a, *b])),
        _ => Err(CliError::Usage(format!("expected x,y but got {s:?}"))),
    }
}

fn integer(s: &str) -> CliResult<i64> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("not an integer: {s:?}")))
}

/// Leaf coordinate `t` and fiber residue `r` as a solenoid point.
pub fn solenoid_point(t: &str, fiber: i64, depth: u32) -> CliResult<SolenoidPoint> {
    let x = ProfiniteInt::from_integer(depth, fiber)?;
    Ok(match scalar(t)? {
        (_, Some(q)) => SolenoidPoint::from_lift_exact(q, x),
        (v, None) => SolenoidPoint::from_lift(v, x),
    })
}

pub fn group_point(group: GroupArg, s: &str, depth: Option<u32>) -> CliResult<GroupPoint> {
    let depth = depth.unwrap_or(DEFAULT_DEPTH);
    Ok(match group {
        GroupArg::Circle => GroupPoint::Circle(circle_point(s)?),
        GroupArg::Torus => GroupPoint::Torus(torus_point(s)?),
        GroupArg::Profinite => GroupPoint::Profinite(ProfiniteInt::from_integer(depth, integer(s)?)?),
        GroupArg::Solenoid => {
            let (t, r) = match s.split_once(';') {
                Some((t, r)) => (t, integer(r)?),
                None => (s, 0),
            };
            GroupPoint::Solenoid(solenoid_point(t, r, depth)?)
        }
    })
}
