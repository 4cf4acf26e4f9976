//! CSV reading and writing for datasets.
//!
//! Format: a header line `f0,f1,...,f{d-1},label[,kind]` followed by one row
//! per point. Features are written with 17 significant digits so a
//! write/read cycle reproduces every value exactly.

use std::io::{BufRead, Write};

use crate::data::{Dataset, ExampleKind, Label};
use crate::error::{Error, Result};

/// Format `v` like C's `%.17g`.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), sign, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn write_csv<W: Write>(ds: &Dataset, mut out: W) -> Result<()> {
    let mut header: Vec<String> = (0..ds.dims()).map(|j| format!("f{j}")).collect();
    header.push("label".into());
    if ds.kinds().is_some() {
        header.push("kind".into());
    }
    writeln!(out, "{}", header.join(","))?;
    let mut line = String::new();
    for i in 0..ds.len() {
        line.clear();
        for v in ds.point(i) {
            line.push_str(&format_float(*v));
            line.push(',');
        }
        line.push_str(&ds.label(i).to_string());
        if let Some(kind) = ds.kind(i) {
            line.push(',');
            line.push_str(kind.as_str());
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: BufRead>(input: R) -> Result<Dataset> {
    let mut lines = input.lines();
    let header = match lines.next() {
        Some(h) => h?,
        None => return Err(Error::Parse { line: 1, msg: "missing header".into() }),
    };
    let cols: Vec<&str> = header.trim_end_matches('\r').split(',').map(str::trim).collect();
    let tagged = cols.last() == Some(&"kind");
    let label_col = if tagged { cols.len().saturating_sub(2) } else { cols.len() - 1 };
    if cols.get(label_col) != Some(&"label") || label_col == 0 {
        return Err(Error::Parse {
            line: 1,
            msg: "header must be f0,...,f{d-1},label[,kind]".into(),
        });
    }
    for (j, c) in cols[..label_col].iter().enumerate() {
        if *c != format!("f{j}") {
            return Err(Error::Parse { line: 1, msg: format!("expected column f{j}, found `{c}`") });
        }
    }
    let dims = label_col;

    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut kinds = tagged.then(Vec::new);
    for (idx, line) in lines.enumerate() {
        let lineno = idx + 2;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected {} fields, found {}", cols.len(), fields.len()),
            });
        }
        for f in &fields[..dims] {
            let v: f64 = f.trim().parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("invalid feature value `{f}`"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse { line: lineno, msg: format!("non-finite value `{f}`") });
            }
            points.push(v);
        }
        let label: Label = fields[dims].trim().parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("invalid label `{}`", fields[dims]),
        })?;
        labels.push(label);
        if let Some(k) = &mut kinds {
            let kind: ExampleKind = fields[dims + 1].trim().parse().map_err(|e: Error| {
                Error::Parse { line: lineno, msg: e.to_string() }
            })?;
            k.push(kind);
        }
    }
    Dataset::new(dims, points, labels, kinds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_matches_printf_g17() {
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(-2.5), "-2.5");
        assert_eq!(format_float(0.1), "0.10000000000000001");
        assert_eq!(format_float(1e-5), "1.0000000000000001e-05");
        assert_eq!(format_float(1e20), "1e+20");
        assert_eq!(format_float(123456.0), "123456");
        assert_eq!(format_float(0.0001), "0.0001");
    }

    #[test]
    fn float_round_trip() {
        for v in [0.1, 1.0 / 3.0, -7.25e-300, 6.02214076e23, f64::MAX, f64::MIN_POSITIVE, 5e-324] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn csv_round_trip_with_kinds() {
        let ds = Dataset::new(
            2,
            vec![0.1, -3.0, 2.0 / 3.0, 1e-7],
            vec![0, 1],
            Some(vec![ExampleKind::Majority, ExampleKind::Rare]),
        )
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&ds, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("f0,f1,label,kind\n"));
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, ds);
    }

    #[test]
    fn malformed_row_names_line() {
        let text = "f0,f1,label\n1,2,0\n3,x,1\n";
        match read_csv(text.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let short = "f0,label\n1,0\n2\n";
        assert!(matches!(read_csv(short.as_bytes()), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn bad_header() {
        assert!(read_csv("a,b\n".as_bytes()).is_err());
        assert!(read_csv("label\n".as_bytes()).is_err());
        assert!(read_csv("".as_bytes()).is_err());
    }
}
