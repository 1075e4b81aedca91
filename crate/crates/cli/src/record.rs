use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use khwp::generate::RNG_NAME;

/// One CSV row; columns are `id,n,m,k,algo,len,oracle,bound,ms,seed`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub id: String,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub algo: String,
    pub len: usize,
    pub oracle: Option<usize>,
    pub bound: Option<usize>,
    pub ms: f64,
    pub seed: String,
}

pub fn seed_label(seed: Option<u64>) -> String {
    seed.map_or_else(|| "-".into(), |s| format!("{RNG_NAME}:{s}"))
}

fn writer<W: Write>(out: W, header: bool) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(header).from_writer(out)
}

pub fn to_csv(records: &[BenchRecord], header: bool) -> String {
    let mut w = writer(Vec::new(), header);
    for r in records {
        w.serialize(r).expect("records serialise");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
}

/// Appends rows, writing the header first when the file is new or empty.
pub fn append_csv(path: &Path, records: &[BenchRecord]) -> std::io::Result<()> {
    let fresh = std::fs::metadata(path).map_or(true, |m| m.len() == 0);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = writer(file, fresh);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BenchRecord {
        BenchRecord {
            id: "t0".into(),
            n: 4,
            m: 3,
            k: 1,
            algo: "solve1".into(),
            len: 4,
            oracle: None,
            bound: Some(4),
            ms: 0.5,
            seed: seed_label(Some(9)),
        }
    }

    #[test]
    fn header_and_empty_optional() {
        let text = to_csv(&[sample()], true);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("id,n,m,k,algo,len,oracle,bound,ms,seed"));
        assert_eq!(lines.next(), Some("t0,4,3,1,solve1,4,,4,0.5,chacha8:9"));
    }

    #[test]
    fn append_writes_header_once() {
        let path = std::env::temp_dir().join(format!("khwp-record-{}.csv", std::process::id()));
        let _ = std::fs::remove_file(&path);
        append_csv(&path, &[sample()]).unwrap();
        append_csv(&path, &[sample()]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::remove_file(&path).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert_eq!(text.matches("id,n").count(), 1);
    }
}
