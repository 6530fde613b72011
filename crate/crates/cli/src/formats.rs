//! JSON and CSV artifacts. JSON objects use sorted keys and exact fraction
//! strings, so identical inputs give byte-identical files.

use divisor_maxcut::literal::{Finding, Status};
use divisor_maxcut::rational::format_rational;
use divisor_maxcut::{
    BoundsReport, DualityReport, Error, Multigraph, OracleResult, Rational, Spectrum, SrmgCertificate,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

fn q(v: &Rational) -> String {
    format_rational(v)
}

pub fn graph_json(g: &Multigraph) -> Value {
    let edges: Vec<Value> = g.edges().map(|(i, j, w)| json!([i, j, q(w)])).collect();
    json!({ "n": g.n(), "labels": g.labels(), "edges": edges })
}

pub fn graph_csv(g: &Multigraph) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["i", "j", "weight"])?;
    for (i, j, wt) in g.edges() {
        w.write_record([i.to_string(), j.to_string(), q(wt)])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is UTF-8"))
}

/// Parses the graph JSON format back into a multigraph.
pub fn graph_from_json(v: &Value) -> Result<Multigraph, Error> {
    let bad = |what: &str| Error::Parse(format!("graph JSON: {what}"));
    let labels: Vec<String> = v["labels"]
        .as_array()
        .ok_or_else(|| bad("missing labels"))?
        .iter()
        .map(|l| l.as_str().map(str::to_owned).ok_or_else(|| bad("label is not a string")))
        .collect::<Result<_, _>>()?;
    if v["n"].as_u64() != Some(labels.len() as u64) {
        return Err(bad("n does not match the label count"));
    }
    let mut edges = Vec::new();
    for e in v["edges"].as_array().ok_or_else(|| bad("missing edges"))? {
        let i = e[0].as_u64().ok_or_else(|| bad("edge endpoint"))? as usize;
        let j = e[1].as_u64().ok_or_else(|| bad("edge endpoint"))? as usize;
        let w = divisor_maxcut::rational::parse_rational(e[2].as_str().ok_or_else(|| bad("edge weight"))?)?;
        edges.push((i, j, w));
    }
    Multigraph::from_edges(labels, edges)
}

pub fn certificate_value(c: &SrmgCertificate) -> Value {
    json!({ "a": q(&c.a), "b": q(&c.b), "c": q(&c.c), "d": q(&c.d), "n": c.n })
}

pub fn spectrum_json(family: &str, cert: &SrmgCertificate, spec: &Spectrum) -> Value {
    let values: Vec<Value> = spec
        .eigenvalues
        .iter()
        .map(|(e, m)| {
            let value = e.as_rational().map_or_else(|| e.to_string(), q);
            json!({ "value": value, "multiplicity": m })
        })
        .collect();
    json!({ "family": family, "spectrum": values, "certificate": certificate_value(cert) })
}

pub fn certificate_json(family: &str, params: &str, d: &DualityReport, b: &BoundsReport, alpha_g: f64) -> Value {
    json!({
        "family": family,
        "params": params,
        "sd_primal": q(&d.sd_primal),
        "sd_dual": q(&d.sd_dual),
        "lambda1": q(&d.lambda1),
        "ell": b.ell_value,
        "u": q(&b.u),
        "ell_ceil": b.ell_ceil,
        "u_floor": b.u_floor,
        "alpha_G": alpha_g,
    })
}

pub fn bounds_json(family: &str, params: &str, b: &BoundsReport) -> Value {
    json!({
        "family": family,
        "params": params,
        "ell": b.ell_value,
        "ell_lower": divisor_maxcut::rational::to_f64(&b.ell.lower()),
        "ell_upper": divisor_maxcut::rational::to_f64(&b.ell.upper()),
        "ell_exact": b.ell.is_exact(),
        "ell_ceil": b.ell_ceil,
        "u": q(&b.u),
        "u_floor": b.u_floor,
    })
}

pub fn oracle_json(family: &str, g: &Multigraph, r: &OracleResult) -> Value {
    let members: Vec<&str> = r.witness.members().map(|i| g.labels()[i].as_str()).collect();
    json!({
        "family": family,
        "n": g.n(),
        "value": q(&r.value),
        "method": r.method.as_str(),
        "exact": r.exact,
        "witness": r.witness.to_hex(),
        "witness_labels": members,
    })
}

/// One simulation or report row; the first ten columns are the simulation CSV contract.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub family: String,
    pub params: String,
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub mean: f64,
    pub cv: f64,
    pub max: String,
    pub u_floor: i64,
    pub ell_ceil: i64,
    pub u: String,
    pub ell: f64,
    pub degenerate: bool,
    pub oracle: Option<String>,
    pub oracle_method: Option<String>,
}

pub fn rows_csv(rows: &[ReportRow]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is UTF-8"))
}

pub fn rows_json(rows: &[ReportRow]) -> Value {
    serde_json::to_value(rows).expect("rows serialize")
}

pub fn findings_json(findings: &[Finding]) -> Value {
    let records: Vec<Value> = findings
        .iter()
        .map(|f| {
            json!({
                "id": f.id,
                "statement": f.statement,
                "status": f.status.as_str(),
                "literal": f.literal,
                "corrected": f.corrected,
            })
        })
        .collect();
    let refuted = findings.iter().filter(|f| f.status == Status::Refuted).count();
    json!({ "findings": records, "refuted": refuted, "confirmed": findings.len() - refuted })
}

fn variant_name(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug.split(['(', ' ', '{']).next().unwrap_or("Error").to_owned()
}

/// Machine-readable record for a run that refuted an exact identity.
pub fn discrepancy_json(context: &str, e: &Error) -> Value {
    json!({ "discrepancy": { "context": context, "kind": variant_name(e), "detail": e.to_string() } })
}

pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use divisor_maxcut::rational::ratio;
    use divisor_maxcut::{lattice_graph, MinusculeParams};

    #[test]
    fn graph_round_trip() {
        let (_, g) = lattice_graph(&MinusculeParams::type_a(4, 1).unwrap()).unwrap();
        let v = graph_json(&g);
        assert_eq!(v["n"], 10);
        assert_eq!(v["edges"].as_array().unwrap().len(), 15);
        assert_eq!(graph_from_json(&v).unwrap(), g);
        let text = to_text(&v);
        let keys: Vec<usize> = ["\"edges\"", "\"labels\"", "\"n\""].iter().map(|k| text.find(k).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn empty_and_fractional_graphs() {
        let one = Multigraph::from_edges(vec!["v".into()], []).unwrap();
        assert_eq!(graph_json(&one)["edges"], json!([]));
        let g = Multigraph::from_edges(vec!["a".into(), "b".into()], [(0, 1, ratio(3, 2))]).unwrap();
        assert_eq!(graph_json(&g)["edges"], json!([[0, 1, "3/2"]]));
        assert_eq!(graph_csv(&g).unwrap(), "i,j,weight\n0,1,3/2\n");
        assert_eq!(graph_from_json(&graph_json(&g)).unwrap().weight(0, 1), &ratio(3, 2));
    }

    #[test]
    fn rejects_bad_graph_json() {
        assert!(graph_from_json(&json!({"n": 2, "labels": ["a"], "edges": []})).is_err());
        assert!(graph_from_json(&json!({"n": 2, "labels": ["a", "b"], "edges": [[0, 1, "x"]]})).is_err());
    }

    #[test]
    fn csv_header_order() {
        let row = ReportRow {
            family: "typeA:4,1".into(),
            params: "2,1,3".into(),
            n: 10,
            samples: 5,
            seed: 0,
            mean: 11.0,
            cv: 0.1,
            max: "12".into(),
            u_floor: 12,
            ell_ceil: 11,
            u: "25/2".into(),
            ell: 10.98,
            degenerate: false,
            oracle: None,
            oracle_method: None,
        };
        let text = rows_csv(&[row]).unwrap();
        assert!(text.starts_with("family,params,n,samples,seed,mean,cv,max,u_floor,ell_ceil,"));
        assert!(text.contains("\"2,1,3\""));
    }

    #[test]
    fn discrepancy_names_the_variant() {
        let v = discrepancy_json("spectrum", &Error::SpectrumRefuted("x".into()));
        assert_eq!(v["discrepancy"]["kind"], "SpectrumRefuted");
    }
}
