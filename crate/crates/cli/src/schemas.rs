/// Output schemas, one per command.
const SCHEMAS: &[(&str, &str)] = &[
    ("rotnum", include_str!("../schemas/rotnum.json")),
    ("rotset", include_str!("../schemas/rotset.json")),
    ("solrot", include_str!("../schemas/solrot.json")),
    ("translate-diagnose", include_str!("../schemas/translate-diagnose.json")),
    ("semiconj", include_str!("../schemas/semiconj.json")),
    ("bmv", include_str!("../schemas/bmv.json")),
    ("suspension-check", include_str!("../schemas/suspension-check.json")),
    ("entropy", include_str!("../schemas/entropy.json")),
    ("entropy-scan", include_str!("../schemas/entropy-scan.json")),
    ("orbit", include_str!("../schemas/orbit.json")),
    ("error", include_str!("../schemas/error.json")),
];

pub fn schema_for(command: &str) -> Option<&'static str> {
    SCHEMAS.iter().find(|(c, _)| *c == command).map(|(_, s)| *s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schemas_are_json() {
        for (name, text) in SCHEMAS {
            let v: serde_json::Value = serde_json::from_str(text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(v.is_object(), "{name}");
        }
        assert!(schema_for("nope").is_none());
    }
}
