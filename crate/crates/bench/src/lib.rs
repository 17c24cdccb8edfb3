//! Benchmark fixtures shared by the criterion targets.

use rotlab_core::{CircleLiftMap, MapModel, MapSpec};

pub fn arnold(c: f64, a: f64) -> CircleLiftMap {
    CircleLiftMap::arnold(c, a).expect("valid Arnold parameters")
}

pub fn model(json: &str) -> MapModel {
    MapSpec::from_json(json).and_then(|s| s.build()).expect("valid map spec")
}
