//! `--float`: decimal approximations beside exact rational strings.

use gns_deform_core::formal_scalar::parse_rational;
use num_traits::ToPrimitive;
use serde_json::Value;

fn approx(s: &str) -> Option<f64> {
    parse_rational(s)?.to_f64()
}

/// Adds `re_float`/`im_float` next to every `re`/`im` pair, recursively.
pub fn annotate(v: &mut Value) {
    match v {
        Value::Object(map) => {
            let mut extra = Vec::new();
            for key in ["re", "im"] {
                if let Some(Value::String(s)) = map.get(key) {
                    if let Some(x) = approx(s) {
                        extra.push((format!("{key}_float"), Value::from(x)));
                    }
                }
            }
            map.extend(extra);
            for (_, child) in map.iter_mut() {
                annotate(child);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(annotate),
        _ => {}
    }
}
