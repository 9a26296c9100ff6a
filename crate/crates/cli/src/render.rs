//! Text and JSON rendering of verdicts and witnesses.

use std::fmt::Write as _;

use rickart_core::{
    Certificate, FiniteModule, ModuleDescription, ModuleHom, PropertyReport, Submodule, Witness,
};
use serde_json::{json, Map, Value};

fn tuple(c: &[u64]) -> String {
    format!(
        "({})",
        c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
    )
}

/// One line per source generator: `g<j> -> (coefficients of its image)`.
pub fn hom_lines(h: &ModuleHom, indent: &str) -> String {
    let mut out = String::new();
    for (j, row) in h.matrix().iter().enumerate() {
        let _ = writeln!(out, "{indent}g{} -> {}", j + 1, tuple(row));
    }
    out
}

/// Generators as coefficient tuples, followed by the size.
pub fn submodule_line(s: &Submodule) -> String {
    let gens = s.generator_coeffs();
    if gens.is_empty() {
        return format!("<0> (size {})", s.len());
    }
    let gens: Vec<String> = gens.iter().map(|g| tuple(g)).collect();
    format!("<{}> (size {})", gens.join(", "), s.len())
}

pub fn witness_text(w: &Witness, indent: &str) -> String {
    let mut out = format!("{indent}witness: {}\n", w.note);
    if let Some(h) = &w.hom {
        let _ = writeln!(out, "{indent}  hom {} -> {}:", h.source(), h.target());
        out.push_str(&hom_lines(h, &format!("{indent}    ")));
    }
    if let Some(s) = &w.submodule {
        let _ = writeln!(out, "{indent}  submodule {}", submodule_line(s));
    }
    out
}

pub fn certificate_text(c: &Certificate, indent: &str) -> String {
    format!(
        "{indent}{} inside summand {}\n",
        submodule_line(&c.submodule),
        submodule_line(&c.summand)
    )
}

pub fn witness_json(w: &Witness) -> Value {
    let mut o = Map::new();
    o.insert("note".into(), json!(w.note));
    if let Some(h) = &w.hom {
        o.insert("hom".into(), json!(h.matrix()));
    }
    if let Some(s) = &w.submodule {
        o.insert("submodule".into(), json!(s.generator_coeffs()));
        o.insert("size".into(), json!(s.len()));
    }
    Value::Object(o)
}

pub fn certificate_json(c: &Certificate) -> Value {
    json!({
        "submodule": c.submodule.generator_coeffs(),
        "summand": c.summand.generator_coeffs(),
    })
}

pub fn module_json(m: &FiniteModule, name: Option<&str>) -> Value {
    let mut v = serde_json::to_value(ModuleDescription::of(m)).expect("description serialises");
    if let (Some(n), Value::Object(o)) = (name, &mut v) {
        o.insert("name".into(), json!(n));
    }
    v
}

pub fn module_header(m: &FiniteModule, name: Option<&str>) -> String {
    let mut s = match name {
        Some(n) => format!("{n} = {m}"),
        None => m.to_string(),
    };
    if let Ok(cf) = m.canonical_form() {
        if cf.as_slice() != m.orders() {
            let _ = write!(s, " (canonical form {cf:?})");
        }
    }
    s
}

pub fn report_text(r: &PropertyReport, m: &FiniteModule, name: Option<&str>) -> String {
    let mut out = format!("module: {}\n", module_header(m, name));
    let width = r.values().iter().map(|(n, _)| n.len()).max().unwrap_or(0);
    for (p, v) in &r.verdicts {
        let _ = writeln!(out, "  {:<width$}  {}", p.name(), v.holds);
        if let Some(w) = &v.witness {
            out.push_str(&witness_text(w, "      "));
        }
    }
    out
}

pub fn report_json(r: &PropertyReport, m: &FiniteModule, name: Option<&str>) -> Value {
    let properties: Map<String, Value> = r
        .values()
        .into_iter()
        .map(|(n, b)| (n.to_string(), json!(b)))
        .collect();
    let witnesses: Map<String, Value> = r
        .verdicts
        .iter()
        .filter_map(|(p, v)| {
            v.witness
                .as_ref()
                .map(|w| (p.name().to_string(), witness_json(w)))
        })
        .collect();
    json!({
        "module": module_json(m, name),
        "properties": properties,
        "witnesses": witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rickart_core::{Engine, Property};

    #[test]
    fn doubling_witness_on_z4() {
        let m = FiniteModule::abelian_group(&[4]).unwrap();
        let v = Engine::default().explain(Property::Rickart, &m).unwrap();
        let w = v.witness.unwrap();
        let text = witness_text(&w, "");
        assert!(text.contains("g1 -> (2)"), "{text}");
        assert!(text.contains("<(2)> (size 2)"), "{text}");
        let j = witness_json(&w);
        assert_eq!(j["hom"], json!([[2]]));
        assert_eq!(j["submodule"], json!([[2]]));
    }

    #[test]
    fn report_json_is_sorted_and_complete() {
        let m = FiniteModule::abelian_group(&[2, 16]).unwrap();
        let r = Engine::default().property_report(&m).unwrap();
        let j = report_json(&r, &m, None);
        let props = j["properties"].as_object().unwrap();
        assert_eq!(props.len(), 14);
        assert_eq!(props["sip"], json!(false));
        assert_eq!(props["ssip-extending"], json!(true));
        assert_eq!(j["module"]["orders"], json!([2, 16]));
        assert!(j["witnesses"]["cs-rickart"]["hom"].is_array());
    }
}
