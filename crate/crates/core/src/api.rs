//! JSON documents for single cells and the HTTP service that serves them.
//!
//! Routes: `GET /api/{q}/{n}/{d}/{k}/` and `GET /api/{q}/{n}/{d}/`, with an
//! optional `?view=all|short|dominance` query.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use crate::engine::{catalogue_sorted, filter_records, BoundsTable, CdcLookup, RecordView};
use crate::model::{BoundRecord, Cell, Direction, IsoTypes};
use crate::Error;

fn number(v: &BigInt) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("integers are valid JSON numbers"))
}

fn entries(records: &[BoundRecord], keep: impl Fn(Direction) -> bool) -> Value {
    Value::Array(
        records
            .iter()
            .filter(|r| keep(r.direction) && r.constraint != "classification")
            .map(|r| json!({"parameter": r.parameter, "name": r.constraint, "value": number(&r.value)}))
            .collect(),
    )
}

fn comments(cell: &Cell) -> String {
    match &cell.iso_types {
        Some(IsoTypes::AtLeast(c)) if cell.is_exact() => format!("at least {c} isomorphism types"),
        _ => String::new(),
    }
}

fn document(request: Vec<i64>, canonical: Vec<i64>, cell: &Cell, lifted: Option<Option<&BigInt>>, view: RecordView) -> Value {
    let records = catalogue_sorted(&filter_records(&cell.records, view));
    let mut m = Map::new();
    m.insert("upper_bound_constraints".into(), entries(&records, |d| d == Direction::Upper));
    m.insert("known_codes".into(), Value::Array(Vec::new()));
    m.insert("upper_bound".into(), number(&cell.best_upper));
    m.insert("classified".into(), Value::Bool(cell.classified));
    m.insert("lower_bound".into(), number(&cell.best_lower));
    m.insert("lower_bound_constraints".into(), entries(&records, |d| d == Direction::Lower));
    m.insert("request".into(), json!(request));
    if let Some(lifted) = lifted {
        m.insert("liftedmrdsizebound".into(), lifted.map_or(Value::Null, number));
    }
    m.insert("comments".into(), Value::String(comments(cell)));
    m.insert("equal_bound_constraints".into(), entries(&records, |d| d == Direction::Exact));
    let nondeduced = if canonical != request { json!([canonical]) } else { json!([]) };
    m.insert("nondeduced".into(), nondeduced);
    Value::Object(m)
}

/// Document for `A_q(n,d;k)`.
pub fn cdc_document(table: &BoundsTable, q: i64, n: i64, d: i64, k: i64, view: RecordView) -> Result<Value, Error> {
    let request = vec![q, n, d, k];
    match table.lookup_cdc(q, n, d, k)? {
        CdcLookup::Stored { canonical, cell } => {
            let c = vec![canonical.q, canonical.n, canonical.d, canonical.k];
            Ok(document(request, c, cell, Some(cell.lifted_mrd_bound.as_ref()), view))
        }
        CdcLookup::Trivial { canonical, value } => {
            let c = vec![canonical.q, canonical.n, canonical.d, canonical.k];
            let cell = Cell::new(value.clone(), value);
            Ok(document(request, c, &cell, Some(None), view))
        }
    }
}

/// Document for `A_q(n,d)`.
pub fn mdc_document(table: &BoundsTable, q: i64, n: i64, d: i64, view: RecordView) -> Result<Value, Error> {
    let cell = table.lookup_mdc(q, n, d)?;
    Ok(document(vec![q, n, d], vec![q, n, d], cell, None, view))
}

/// HTTP status for an error.
pub fn status_of(err: &Error) -> u16 {
    match err {
        Error::OutOfGrid(_) => 404,
        Error::InvalidParameter(_) | Error::UndefinedView(_) | Error::Parse { .. } => 400,
        _ => 500,
    }
}

fn error_body(msg: &str) -> String {
    json!({ "error": msg }).to_string()
}

/// Resolves a request URL to a status code and JSON body.
pub fn route(table: &BoundsTable, url: &str) -> (u16, String) {
    let (path, query) = url.split_once('?').unwrap_or((url, ""));
    let mut view = RecordView::All;
    for pair in query.split('&').filter(|p| !p.is_empty()) {
        match pair.split_once('=') {
            Some(("view", v)) => match RecordView::from_str(v) {
                Ok(v) => view = v,
                Err(e) => return (400, error_body(&e.to_string())),
            },
            _ => return (400, error_body(&format!("unknown query parameter '{pair}'"))),
        }
    }
    let parts: Vec<&str> = path.split('/').filter(|s| !s.is_empty()).collect();
    if parts.first() != Some(&"api") || !(4..=5).contains(&parts.len()) {
        return (404, error_body("expected /api/{q}/{n}/{d}/ or /api/{q}/{n}/{d}/{k}/"));
    }
    let nums: Result<Vec<i64>, _> = parts[1..].iter().map(|s| s.parse::<i64>()).collect();
    let Ok(nums) = nums else {
        return (400, error_body("parameters must be integers"));
    };
    let doc = match *nums.as_slice() {
        [q, n, d, k] => cdc_document(table, q, n, d, k, view),
        [q, n, d] => mdc_document(table, q, n, d, view),
        _ => unreachable!("length checked above"),
    };
    match doc {
        Ok(v) => (200, v.to_string()),
        Err(e) => (status_of(&e), error_body(&e.to_string())),
    }
}

/// Serves `table` until the process is stopped.
pub fn serve(table: &BoundsTable, addr: &str) -> Result<(), Error> {
    let server = tiny_http::Server::http(addr).map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    let header = tiny_http::Header::from_bytes("Content-Type", "application/json").expect("static header");
    for request in server.incoming_requests() {
        let (status, body) = if *request.method() == tiny_http::Method::Get {
            route(table, request.url())
        } else {
            (405, error_body("only GET is supported"))
        };
        let response = tiny_http::Response::from_string(body).with_status_code(status).with_header(header.clone());
        let _ = request.respond(response);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{fixpoint, Facts, GridConfig};

    fn table() -> BoundsTable {
        fixpoint(&GridConfig::new(vec![2], 7), &Facts::builtin()).unwrap()
    }

    #[test]
    fn key_order_and_headline_values() {
        let t = table();
        let (status, body) = route(&t, "/api/2/6/4/3/");
        assert_eq!(status, 200);
        let keys: Vec<String> = serde_json::from_str::<Map<String, Value>>(&body).unwrap().keys().cloned().collect();
        assert_eq!(
            keys,
            [
                "upper_bound_constraints",
                "known_codes",
                "upper_bound",
                "classified",
                "lower_bound",
                "lower_bound_constraints",
                "request",
                "liftedmrdsizebound",
                "comments",
                "equal_bound_constraints",
                "nondeduced"
            ]
        );
        let v: Value = serde_json::from_str(&body).unwrap();
        assert_eq!(v["lower_bound"], json!(77));
        assert_eq!(v["upper_bound"], json!(77));
        assert_eq!(v["classified"], json!(true));
        assert_eq!(v["liftedmrdsizebound"], json!(71));
    }

    #[test]
    fn aliases_trivial_cells_and_errors() {
        let t = table();
        let v: Value = serde_json::from_str(&route(&t, "/api/2/6/4/4/").1).unwrap();
        assert_eq!(v["nondeduced"], json!([[2, 6, 4, 2]]));
        assert_eq!(v["lower_bound"], json!(21));
        let v: Value = serde_json::from_str(&route(&t, "/api/2/6/3/3/").1).unwrap();
        assert_eq!(v["nondeduced"], json!([[2, 6, 4, 3]]));
        let v: Value = serde_json::from_str(&route(&t, "/api/2/6/8/3/").1).unwrap();
        assert_eq!((v["lower_bound"].clone(), v["upper_bound"].clone()), (json!(1), json!(1)));
        assert_eq!(route(&t, "/api/6/6/4/3/").0, 400);
        assert_eq!(route(&t, "/api/2/12/4/3/").0, 404);
        assert_eq!(route(&t, "/api/2/6/4/3/?view=bogus").0, 400);
        let v: Value = serde_json::from_str(&route(&t, "/api/2/5/3/").1).unwrap();
        assert_eq!(v["upper_bound"], json!(18));
        assert!(v.get("liftedmrdsizebound").is_none());
    }

    #[test]
    fn output_is_byte_stable() {
        let t = table();
        assert_eq!(route(&t, "/api/2/7/4/3/"), route(&t, "/api/2/7/4/3/"));
    }
}
