use crate::error::{Error, Result};
use std::fmt::Write;

pub const REPORT_HEADER: &str = "# augteich report v1";

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnType {
    Num,
    Int,
    Bool,
    Text,
}

impl ColumnType {
    fn name(self) -> &'static str {
        match self {
            ColumnType::Num => "num",
            ColumnType::Int => "int",
            ColumnType::Bool => "bool",
            ColumnType::Text => "text",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "num" => ColumnType::Num,
            "int" => ColumnType::Int,
            "bool" => ColumnType::Bool,
            "text" => ColumnType::Text,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<(String, ColumnType)>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: &str, columns: &[(&str, ColumnType)]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|(n, t)| (n.to_string(), *t)).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Run metadata, result tables and warnings, in a fixed order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub command: String,
    pub meta: Vec<(String, String)>,
    pub tables: Vec<Table>,
    pub warnings: Vec<String>,
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('|', "\\|").replace('\n', "\\n")
}

fn split_cells(line: &str) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut chars = line.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some('n') => out.last_mut().unwrap().push('\n'),
                Some(o) => out.last_mut().unwrap().push(o),
                None => {}
            },
            '|' => out.push(String::new()),
            _ => out.last_mut().unwrap().push(c),
        }
    }
    out.into_iter().map(|c| c.trim().to_string()).collect()
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Num(x) => fmt_num(*x),
            Value::Int(i) => i.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Text(s) => escape(s),
        }
    }

    fn render_csv(&self) -> String {
        match self {
            Value::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Value::Text(s) => s.clone(),
            other => other.render(),
        }
    }

    fn parse(s: &str, t: ColumnType) -> Option<Self> {
        Some(match t {
            ColumnType::Num => Value::Num(s.parse().ok()?),
            ColumnType::Int => Value::Int(s.parse().ok()?),
            ColumnType::Bool => Value::Bool(s.parse().ok()?),
            ColumnType::Text => Value::Text(s.to_string()),
        })
    }
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { command: command.into(), ..Default::default() }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.meta.push((key.into(), value.into()));
    }

    pub fn meta_num(&mut self, key: &str, value: f64) {
        self.meta(key, fmt_num(value));
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{REPORT_HEADER}").unwrap();
        writeln!(s, "command: {}", escape(&self.command)).unwrap();
        for (k, v) in &self.meta {
            writeln!(s, "meta {}: {}", escape(k), escape(v)).unwrap();
        }
        for t in &self.tables {
            writeln!(s, "[table {}]", escape(&t.name)).unwrap();
            let cols: Vec<String> = t.columns.iter().map(|(n, ty)| format!("{}:{}", escape(n), ty.name())).collect();
            writeln!(s, "columns: {}", cols.join(" | ")).unwrap();
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(Value::render).collect();
                writeln!(s, "row: {}", cells.join(" | ")).unwrap();
            }
            writeln!(s, "[end]").unwrap();
        }
        for w in &self.warnings {
            writeln!(s, "warning: {}", escape(w)).unwrap();
        }
        s
    }

    /// Tables as CSV blocks, each preceded by a `# table` comment line.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (k, t) in self.tables.iter().enumerate() {
            if k > 0 {
                s.push('\n');
            }
            writeln!(s, "# table {}", t.name).unwrap();
            let head: Vec<&str> = t.columns.iter().map(|(n, _)| n.as_str()).collect();
            writeln!(s, "{}", head.join(",")).unwrap();
            for r in &t.rows {
                let cells: Vec<String> = r.iter().map(Value::render_csv).collect();
                writeln!(s, "{}", cells.join(",")).unwrap();
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |n: usize, m: &str| Error::schema(format!("report line {}", n + 1), m.to_string());
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, REPORT_HEADER)) => {}
            _ => return Err(bad(0, "missing report header")),
        }
        let mut rep = Report::default();
        let mut current: Option<Table> = None;
        for (n, line) in lines {
            if let Some(t) = current.as_mut() {
                if line == "[end]" {
                    rep.tables.push(current.take().unwrap());
                } else if let Some(c) = line.strip_prefix("columns: ") {
                    for cell in split_cells(c) {
                        let (name, ty) = cell.rsplit_once(':').ok_or_else(|| bad(n, "column without type"))?;
                        let ty = ColumnType::parse(ty).ok_or_else(|| bad(n, "unknown column type"))?;
                        t.columns.push((name.to_string(), ty));
                    }
                } else if let Some(r) = line.strip_prefix("row: ") {
                    let cells = split_cells(r);
                    if cells.len() != t.columns.len() {
                        return Err(bad(n, "row width differs from the column count"));
                    }
                    let row = cells
                        .iter()
                        .zip(&t.columns)
                        .map(|(c, (_, ty))| Value::parse(c, *ty).ok_or_else(|| bad(n, "cell does not match its column type")))
                        .collect::<Result<Vec<_>>>()?;
                    t.rows.push(row);
                } else {
                    return Err(bad(n, "unexpected line inside a table"));
                }
            } else if let Some(c) = line.strip_prefix("command: ") {
                rep.command = split_cells(c).concat();
            } else if let Some(m) = line.strip_prefix("meta ") {
                let (k, v) = m.split_once(": ").ok_or_else(|| bad(n, "meta line without value"))?;
                rep.meta.push((split_cells(k).concat(), split_cells(v).join("|")));
            } else if let Some(name) = line.strip_prefix("[table ").and_then(|l| l.strip_suffix(']')) {
                current = Some(Table { name: split_cells(name).concat(), columns: Vec::new(), rows: Vec::new() });
            } else if let Some(w) = line.strip_prefix("warning: ") {
                rep.warnings.push(split_cells(w).join("|"));
            } else {
                return Err(bad(n, "unrecognized line"));
            }
        }
        if current.is_some() {
            return Err(Error::schema("report", "unterminated table"));
        }
        Ok(rep)
    }
}
