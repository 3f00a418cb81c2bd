use clap::ValueEnum;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

/// Prints one record with the schema version attached.
pub fn emit(format: Format, value: Value) {
    let mut record = Map::new();
    record.insert("schema".into(), SCHEMA_VERSION.into());
    match value {
        Value::Object(map) => record.extend(map),
        other => {
            record.insert("value".into(), other);
        }
    }
    match format {
        Format::Json => println!("{}", Value::Object(record)),
        Format::Tsv => print!("{}", tsv(&record)),
    }
}

/// A header line of keys and a line of values; nested values stay as JSON.
fn tsv(record: &Map<String, Value>) -> String {
    let keys: Vec<&str> = record.keys().map(String::as_str).collect();
    let values: Vec<String> = record.values().map(cell).collect();
    format!("{}\n{}\n", keys.join("\t"), values.join("\t"))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.replace(['\t', '\n'], " "),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn tsv_flattens_one_level() {
        let Value::Object(map) = json!({"a": "x", "b": [1, 2], "c": null}) else { unreachable!() };
        assert_eq!(tsv(&map), "a\tb\tc\nx\t[1,2]\t\n");
    }
}
