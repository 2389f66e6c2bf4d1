//! Canonical JSON text and path helpers.

use serde_json::Value as Json;

fn compact(v: &Json, out: &mut String) {
    match v {
        Json::Object(m) => {
            out.push('{');
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Json::String(k.clone()).to_string());
                out.push(':');
                compact(&m[k], out);
            }
            out.push('}');
        }
        Json::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                compact(x, out);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

/// Compact text with sorted keys.
pub fn to_compact(v: &Json) -> String {
    let mut s = String::new();
    compact(v, &mut s);
    s
}

/// Sorted keys; a top-level object puts each key on its own line and
/// top-level arrays one element per line. Ends with a newline.
pub fn write_canonical(v: &Json) -> String {
    let Json::Object(m) = v else {
        return to_compact(v) + "\n";
    };
    let mut keys: Vec<&String> = m.keys().collect();
    keys.sort();
    let mut out = String::from("{\n");
    for (i, k) in keys.iter().enumerate() {
        out.push_str(&Json::String((*k).clone()).to_string());
        out.push(':');
        match &m[*k] {
            Json::Array(a) if !a.is_empty() => {
                out.push_str("[\n");
                for (j, x) in a.iter().enumerate() {
                    compact(x, &mut out);
                    out.push_str(if j + 1 < a.len() { ",\n" } else { "\n" });
                }
                out.push(']');
            }
            x => compact(x, &mut out),
        }
        out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
    }
    out.push_str("}\n");
    out
}

/// `$.a[2].b` to the JSON pointer `/a/2/b`.
pub fn path_to_pointer(path: &str) -> String {
    let rest = path.strip_prefix('$').unwrap_or(path);
    let mut out = String::new();
    let mut seg = String::new();
    let flush = |seg: &mut String, out: &mut String| {
        if !seg.is_empty() {
            out.push('/');
            out.push_str(&seg.replace('~', "~0").replace('/', "~1"));
            seg.clear();
        }
    };
    for c in rest.chars() {
        match c {
            '.' | '[' => flush(&mut seg, &mut out),
            ']' => flush(&mut seg, &mut out),
            c => seg.push(c),
        }
    }
    flush(&mut seg, &mut out);
    out
}
