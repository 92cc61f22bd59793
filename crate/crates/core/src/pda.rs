//! Placement delivery arrays.
//!
//! A [`Pda`] is an `F x K` grid of stars and ordinary symbols. Columns are
//! nodes, rows are file batches: a star at `(i, k)` means node `k` stores
//! batch `i`, and an ordinary symbol names a multicast opportunity. Two equal
//! ordinary symbols must sit in distinct rows and columns (condition a) and
//! the two "crossing" entries of such a pair must be stars (condition b).
//!
//! Every `Pda` value is validated and canonical: ordinary symbols are
//! `1..=S`, numbered by first occurrence in row-major order. All row and
//! column indices in this API are zero-based; [`Violation`]'s `Display` and
//! the text format's error positions are one-based.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

/// The 6 x 4 array used throughout the tests and docs, in canonical text
/// form: every 2-subset of four nodes as a row, 3-regular, four symbols.
pub const EXAMPLE_1: &str = "6 4\n* * 1 2\n* 1 * 3\n* 2 3 *\n1 * * 4\n2 * 4 *\n3 4 * *\n";

/// One cell of a placement delivery array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PdaEntry {
    Star,
    /// Ordinary symbol, always positive.
    Symbol(u32),
}

impl PdaEntry {
    pub fn is_star(self) -> bool {
        matches!(self, PdaEntry::Star)
    }

    pub fn symbol(self) -> Option<u32> {
        match self {
            PdaEntry::Star => None,
            PdaEntry::Symbol(s) => Some(s),
        }
    }
}

impl fmt::Display for PdaEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PdaEntry::Star => f.write_str("*"),
            PdaEntry::Symbol(s) => write!(f, "{s}"),
        }
    }
}

/// The `(K, F, T, S)` parameter tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PdaParams {
    pub k: usize,
    pub f: usize,
    pub t: usize,
    pub s: usize,
}

impl fmt::Display for PdaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.k, self.f, self.t, self.s)
    }
}

/// A single rule violation found by [`validate_pda`]. Coordinates are
/// zero-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Row length differs from the first row.
    Shape {
        row: usize,
        expected: usize,
        found: usize,
    },
    /// Symbol 0 is not an ordinary symbol.
    ZeroSymbol { row: usize, col: usize },
    /// Condition a): a symbol repeats within one row.
    SameRow {
        symbol: u32,
        row: usize,
        cols: (usize, usize),
    },
    /// Condition a): a symbol repeats within one column.
    SameColumn {
        symbol: u32,
        col: usize,
        rows: (usize, usize),
    },
    /// Condition b): for `grid[j1][k1] = grid[j2][k2] = s`, at least one of
    /// `grid[j1][k2]`, `grid[j2][k1]` is not a star.
    CrossNotStar {
        symbol: u32,
        rows: (usize, usize),
        cols: (usize, usize),
    },
    /// A label in `1..=max` never occurs.
    MissingSymbol { symbol: u32 },
    /// Labels are not numbered by first occurrence in row-major order.
    NonCanonical {
        row: usize,
        col: usize,
        expected: u32,
        found: u32,
    },
}

impl Violation {
    /// Short rule tag: `"a"`, `"b"`, `"coverage"`, `"canonical"` or `"shape"`.
    pub fn rule(&self) -> &'static str {
        match self {
            Violation::Shape { .. } | Violation::ZeroSymbol { .. } => "shape",
            Violation::SameRow { .. } | Violation::SameColumn { .. } => "a",
            Violation::CrossNotStar { .. } => "b",
            Violation::MissingSymbol { .. } => "coverage",
            Violation::NonCanonical { .. } => "canonical",
        }
    }

    /// Whether this violates condition a) or b) (or the grid shape), as
    /// opposed to a labelling issue that canonicalization would fix.
    pub fn is_structural(&self) -> bool {
        !matches!(
            self,
            Violation::MissingSymbol { .. } | Violation::NonCanonical { .. }
        )
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Shape { row, expected, found } => {
                write!(f, "row {} has {found} entries, expected {expected}", row + 1)
            }
            Violation::ZeroSymbol { row, col } => {
                write!(f, "entry ({}, {}) is 0; ordinary symbols must be positive", row + 1, col + 1)
            }
            Violation::SameRow { symbol, row, cols } => write!(
                f,
                "condition a): symbol {symbol} occurs twice in row {} (columns {} and {})",
                row + 1,
                cols.0 + 1,
                cols.1 + 1
            ),
            Violation::SameColumn { symbol, col, rows } => write!(
                f,
                "condition a): symbol {symbol} occurs twice in column {} (rows {} and {})",
                col + 1,
                rows.0 + 1,
                rows.1 + 1
            ),
            Violation::CrossNotStar { symbol, rows, cols } => write!(
                f,
                "condition b): symbol {symbol} at rows {{{},{}}}, columns {{{},{}}} needs stars on the crossing entries",
                rows.0 + 1,
                rows.1 + 1,
                cols.0 + 1,
                cols.1 + 1
            ),
            Violation::MissingSymbol { symbol } => write!(f, "symbol {symbol} never occurs"),
            Violation::NonCanonical { row, col, expected, found } => write!(
                f,
                "entry ({}, {}) introduces symbol {found}, canonical numbering expects {expected}",
                row + 1,
                col + 1
            ),
        }
    }
}

/// Outcome of [`validate_pda`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// Derived parameters; present even when violations exist, as long as
    /// the grid is rectangular.
    pub params: Option<PdaParams>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// True if only labelling violations (coverage, canonical order) exist.
    pub fn is_structurally_ok(&self) -> bool {
        self.violations.iter().all(|v| !v.is_structural())
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return match self.params {
                Some(p) => write!(f, "ok {p}"),
                None => f.write_str("ok"),
            };
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdaError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("grid must have at least one row and one column")]
    EmptyGrid,
    #[error("invalid PDA: {0}")]
    Invalid(ValidationReport),
    #[error("row {} keeps no star in the selected columns (outage)", .row + 1)]
    EmptyStarRow { row: usize },
    #[error("node {} is out of range for K = {k}", .node + 1)]
    NodeOutOfRange { node: usize, k: usize },
    #[error("node {} selected more than once", .node + 1)]
    DuplicateNode { node: usize },
    #[error("node set is empty")]
    EmptyNodeSet,
}

/// Check the PDA conditions on a raw grid and report every violation.
pub fn validate_pda(rows: &[Vec<PdaEntry>]) -> ValidationReport {
    let mut violations = Vec::new();
    let k = rows.first().map_or(0, Vec::len);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != k {
            violations.push(Violation::Shape {
                row: i,
                expected: k,
                found: row.len(),
            });
        }
    }
    if !violations.is_empty() {
        return ValidationReport {
            params: None,
            violations,
        };
    }

    let mut t = 0usize;
    let mut occ: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    let mut next_label = 1u32;
    let mut seen = BTreeSet::new();
    let mut canonical_reported = false;
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            match *e {
                PdaEntry::Star => t += 1,
                PdaEntry::Symbol(0) => violations.push(Violation::ZeroSymbol { row: i, col: j }),
                PdaEntry::Symbol(s) => {
                    occ.entry(s).or_default().push((i, j));
                    if seen.insert(s) {
                        if s != next_label && !canonical_reported {
                            violations.push(Violation::NonCanonical {
                                row: i,
                                col: j,
                                expected: next_label,
                                found: s,
                            });
                            canonical_reported = true;
                        }
                        next_label += 1;
                    }
                }
            }
        }
    }

    for (&s, places) in &occ {
        for (a, &(j1, k1)) in places.iter().enumerate() {
            for &(j2, k2) in &places[a + 1..] {
                if j1 == j2 {
                    violations.push(Violation::SameRow {
                        symbol: s,
                        row: j1,
                        cols: (k1, k2),
                    });
                } else if k1 == k2 {
                    violations.push(Violation::SameColumn {
                        symbol: s,
                        col: k1,
                        rows: (j1, j2),
                    });
                } else if !(rows[j1][k2].is_star() && rows[j2][k1].is_star()) {
                    violations.push(Violation::CrossNotStar {
                        symbol: s,
                        rows: (j1, j2),
                        cols: (k1, k2),
                    });
                }
            }
        }
    }

    if let Some((&max, _)) = occ.iter().next_back() {
        for s in 1..=max {
            if !occ.contains_key(&s) {
                violations.push(Violation::MissingSymbol { symbol: s });
            }
        }
    }

    ValidationReport {
        params: Some(PdaParams {
            k,
            f: rows.len(),
            t,
            s: occ.len(),
        }),
        violations,
    }
}

/// Renumber ordinary symbols by first occurrence in row-major order.
pub fn canonicalize(rows: &[Vec<PdaEntry>]) -> Vec<Vec<PdaEntry>> {
    let mut map: HashMap<u32, u32> = HashMap::new();
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|e| match *e {
                    PdaEntry::Star => PdaEntry::Star,
                    PdaEntry::Symbol(s) => {
                        let next = map.len() as u32 + 1;
                        PdaEntry::Symbol(*map.entry(s).or_insert(next))
                    }
                })
                .collect()
        })
        .collect()
}

/// Exact derived statistics of a PDA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdaStats {
    pub params: PdaParams,
    /// Minimum number of stars in any row.
    pub tau: usize,
    /// Multiplicity `t` -> number of symbols occurring exactly `t` times.
    pub s_t: BTreeMap<usize, usize>,
    /// Multiplicity `t` -> fraction of ordinary entries whose symbol occurs
    /// `t` times. Empty for the trivial all-star array.
    pub theta: BTreeMap<usize, BigRational>,
    /// `Some(g)` when every symbol occurs exactly `g` times.
    pub regular_g: Option<usize>,
    /// `T / F`.
    pub storage_load: BigRational,
    /// At least one star per row.
    pub is_comp: bool,
}

impl PdaStats {
    /// `theta_t`, zero for multiplicities that do not occur.
    pub fn theta_at(&self, t: usize) -> BigRational {
        self.theta
            .get(&t)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }
}

/// A validated, canonical placement delivery array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pda {
    k: usize,
    f: usize,
    t: usize,
    s: usize,
    grid: Vec<PdaEntry>,
}

impl Pda {
    /// Canonicalize and validate a grid given as rows.
    pub fn from_rows(rows: Vec<Vec<PdaEntry>>) -> Result<Pda, PdaError> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(PdaError::EmptyGrid);
        }
        let pre = validate_pda(&rows);
        if !pre.is_structurally_ok() {
            return Err(PdaError::Invalid(pre));
        }
        let rows = canonicalize(&rows);
        let report = validate_pda(&rows);
        if !report.is_ok() {
            return Err(PdaError::Invalid(report));
        }
        let params = report.params.expect("rectangular grid has params");
        Ok(Pda {
            k: params.k,
            f: params.f,
            t: params.t,
            s: params.s,
            grid: rows.into_iter().flatten().collect(),
        })
    }

    /// Parse the text format (see [`Pda::render`]).
    pub fn parse(text: &[u8]) -> Result<Pda, PdaError> {
        Pda::from_rows(parse_rows(text)?)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn params(&self) -> PdaParams {
        PdaParams {
            k: self.k,
            f: self.f,
            t: self.t,
            s: self.s,
        }
    }

    pub fn get(&self, row: usize, col: usize) -> PdaEntry {
        self.grid[row * self.k + col]
    }

    pub fn row(&self, row: usize) -> &[PdaEntry] {
        &self.grid[row * self.k..(row + 1) * self.k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[PdaEntry]> + '_ {
        self.grid.chunks(self.k)
    }

    pub fn to_rows(&self) -> Vec<Vec<PdaEntry>> {
        self.rows().map(<[PdaEntry]>::to_vec).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.s == 0
    }

    /// Minimum number of stars in any row.
    pub fn min_storage_number(&self) -> usize {
        self.rows()
            .map(|r| r.iter().filter(|e| e.is_star()).count())
            .min()
            .unwrap_or(0)
    }

    /// Positions `(row, col)` of each symbol, indexed by `symbol - 1`, in
    /// row-major order.
    pub fn occurrences(&self) -> Vec<Vec<(usize, usize)>> {
        let mut occ = vec![Vec::new(); self.s];
        for (idx, e) in self.grid.iter().enumerate() {
            if let PdaEntry::Symbol(s) = e {
                occ[*s as usize - 1].push((idx / self.k, idx % self.k));
            }
        }
        occ
    }

    pub fn stats(&self) -> PdaStats {
        let mut s_t: BTreeMap<usize, usize> = BTreeMap::new();
        for places in self.occurrences() {
            *s_t.entry(places.len()).or_default() += 1;
        }
        let ordinary = self.k * self.f - self.t;
        let theta = s_t
            .iter()
            .map(|(&t, &count)| {
                (
                    t,
                    BigRational::new(BigInt::from(count * t), BigInt::from(ordinary)),
                )
            })
            .collect();
        let regular_g = if s_t.len() == 1 {
            s_t.keys().next().copied()
        } else {
            None
        };
        let tau = self.min_storage_number();
        PdaStats {
            params: self.params(),
            tau,
            s_t,
            theta,
            regular_g,
            storage_load: BigRational::new(BigInt::from(self.t), BigInt::from(self.f)),
            is_comp: tau >= 1,
        }
    }

    /// Restrict to the given columns (zero-based node indices, kept in the
    /// given order). Symbols keep the parent's labels.
    pub fn column_subarray(&self, nodes: &[usize]) -> Result<SubArray, PdaError> {
        if nodes.is_empty() {
            return Err(PdaError::EmptyNodeSet);
        }
        let mut seen = BTreeSet::new();
        for &n in nodes {
            if n >= self.k {
                return Err(PdaError::NodeOutOfRange { node: n, k: self.k });
            }
            if !seen.insert(n) {
                return Err(PdaError::DuplicateNode { node: n });
            }
        }
        let mut grid = Vec::with_capacity(self.f * nodes.len());
        for i in 0..self.f {
            let row: Vec<PdaEntry> = nodes.iter().map(|&n| self.get(i, n)).collect();
            if !row.iter().any(|e| e.is_star()) {
                return Err(PdaError::EmptyStarRow { row: i });
            }
            grid.extend(row);
        }
        Ok(SubArray {
            nodes: nodes.to_vec(),
            f: self.f,
            grid,
        })
    }

    /// Render in the text format: a `"F K"` header line followed by `F`
    /// lines of `K` space-separated entries.
    pub fn render(&self) -> String {
        render_grid(self.f, self.k, &self.grid)
    }
}

impl fmt::Display for Pda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn render_grid(f: usize, k: usize, grid: &[PdaEntry]) -> String {
    let mut out = format!("{f} {k}\n");
    if k == 0 {
        return out;
    }
    for row in grid.chunks(k) {
        let line: Vec<String> = row.iter().map(ToString::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Column restriction of a [`Pda`] to an active node set. Labels are the
/// parent's, so symbols may be missing and need not be contiguous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubArray {
    nodes: Vec<usize>,
    f: usize,
    grid: Vec<PdaEntry>,
}

impl SubArray {
    /// Parent node index of each column.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn width(&self) -> usize {
        self.nodes.len()
    }

    /// Entry at `row` and column position `pos` (not the parent node index).
    pub fn get(&self, row: usize, pos: usize) -> PdaEntry {
        self.grid[row * self.nodes.len() + pos]
    }

    pub fn to_rows(&self) -> Vec<Vec<PdaEntry>> {
        self.grid
            .chunks(self.nodes.len())
            .map(<[PdaEntry]>::to_vec)
            .collect()
    }

    /// Occurrences `(row, parent node)` of every symbol present, with each
    /// list sorted by node.
    pub fn occurrences(&self) -> BTreeMap<u32, Vec<(usize, usize)>> {
        let w = self.nodes.len();
        let mut occ: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
        for (idx, e) in self.grid.iter().enumerate() {
            if let PdaEntry::Symbol(s) = e {
                occ.entry(*s)
                    .or_default()
                    .push((idx / w, self.nodes[idx % w]));
            }
        }
        for places in occ.values_mut() {
            places.sort_by_key(|&(_, node)| node);
        }
        occ
    }

    /// Validation of the restricted grid as is (labels not renumbered).
    pub fn validate(&self) -> ValidationReport {
        validate_pda(&self.to_rows())
    }

    /// Canonical standalone PDA with the same structure.
    pub fn to_pda(&self) -> Result<Pda, PdaError> {
        Pda::from_rows(self.to_rows())
    }

    /// Text format with the parent's labels; parses back to [`Self::to_pda`].
    pub fn render(&self) -> String {
        render_grid(self.f, self.nodes.len(), &self.grid)
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> PdaError {
    PdaError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Parse the text format into raw rows without validating PDA conditions.
pub fn parse_rows(text: &[u8]) -> Result<Vec<Vec<PdaEntry>>, PdaError> {
    if let Some(pos) = text.iter().position(|b| !b.is_ascii()) {
        let line = text[..pos].iter().filter(|&&b| b == b'\n').count() + 1;
        let column = pos
            - text[..pos]
                .iter()
                .rposition(|&b| b == b'\n')
                .map_or(0, |p| p + 1)
            + 1;
        return Err(syntax(line, column, "non-ASCII byte"));
    }
    let text = std::str::from_utf8(text).expect("ASCII is valid UTF-8");

    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        });

    let (hline, header) = lines
        .next()
        .ok_or_else(|| syntax(1, 1, "missing \"F K\" header"))?;
    let htoks = tokens(header);
    if htoks.len() != 2 {
        return Err(syntax(hline, 1, "header must be \"F K\""));
    }
    let mut dims = [0usize; 2];
    for (slot, &(col, tok)) in dims.iter_mut().zip(&htoks) {
        *slot = tok
            .parse::<usize>()
            .ok()
            .filter(|_| tok.bytes().all(|b| b.is_ascii_digit()))
            .ok_or_else(|| {
                syntax(
                    hline,
                    col,
                    format!("expected a decimal integer, found {tok:?}"),
                )
            })?;
    }
    let [f, k] = dims;
    if f == 0 || k == 0 {
        return Err(PdaError::EmptyGrid);
    }

    let mut rows = Vec::with_capacity(f);
    for (lno, line) in lines {
        if rows.len() == f {
            return Err(syntax(
                lno,
                1,
                format!("unexpected row beyond the declared {f}"),
            ));
        }
        let toks = tokens(line);
        if toks.len() != k {
            return Err(syntax(
                lno,
                1,
                format!("expected {k} entries, found {}", toks.len()),
            ));
        }
        let mut row = Vec::with_capacity(k);
        for (col, tok) in toks {
            if tok == "*" {
                row.push(PdaEntry::Star);
                continue;
            }
            let sym = tok
                .parse::<u32>()
                .ok()
                .filter(|&v| v > 0 && tok.bytes().all(|b| b.is_ascii_digit()))
                .ok_or_else(|| {
                    syntax(
                        lno,
                        col,
                        format!("expected '*' or a positive integer, found {tok:?}"),
                    )
                })?;
            row.push(PdaEntry::Symbol(sym));
        }
        rows.push(row);
    }
    if rows.len() != f {
        let last = text.lines().count().max(1);
        return Err(syntax(
            last,
            1,
            format!("expected {f} rows, found {}", rows.len()),
        ));
    }
    Ok(rows)
}

/// Whitespace-separated tokens with their one-based starting column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_ascii_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use PdaEntry::{Star as X, Symbol as N};

    fn ex1() -> Pda {
        Pda::parse(EXAMPLE_1.as_bytes()).unwrap()
    }

    #[test]
    fn parses_example_one() {
        let p = ex1();
        assert_eq!(
            p.params(),
            PdaParams {
                k: 4,
                f: 6,
                t: 12,
                s: 4
            }
        );
        assert_eq!(p.row(0), &[X, X, N(1), N(2)]);
        assert_eq!(p.render(), EXAMPLE_1);
    }

    #[test]
    fn parses_trivial_and_comments() {
        let p = Pda::parse(b"# one node\n1 1\n*").unwrap();
        assert_eq!(
            p.params(),
            PdaParams {
                k: 1,
                f: 1,
                t: 1,
                s: 0
            }
        );
        assert!(p.is_trivial());
    }

    #[test]
    fn repeated_symbol_in_row_is_a_validation_error() {
        // One row, two columns.
        let err = Pda::parse(b"1 2\n1 1").unwrap_err();
        match err {
            PdaError::Invalid(r) => {
                assert!(r.violations.contains(&Violation::SameRow {
                    symbol: 1,
                    row: 0,
                    cols: (0, 1)
                }));
                assert!(r.violations[0].to_string().contains("row 1"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn header_is_rows_then_columns() {
        // "2 1" declares two rows of one entry each.
        assert!(matches!(
            Pda::parse(b"2 1\n1 1"),
            Err(PdaError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn syntax_errors_report_position() {
        match Pda::parse(b"1 3\n* x *").unwrap_err() {
            PdaError::Syntax { line, column, .. } => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Pda::parse(b"1 2\n* 0"),
            Err(PdaError::Syntax { .. })
        ));
        assert!(matches!(
            Pda::parse(b"1 2\n* -1"),
            Err(PdaError::Syntax { .. })
        ));
        assert!(matches!(
            Pda::parse(b"1 2\n*"),
            Err(PdaError::Syntax { .. })
        ));
        assert!(matches!(
            Pda::parse(b"1 2\n* *\n* *"),
            Err(PdaError::Syntax { .. })
        ));
        assert!(matches!(Pda::parse(b""), Err(PdaError::Syntax { .. })));
        assert!(matches!(
            Pda::parse("1 1\n\u{2217}".as_bytes()),
            Err(PdaError::Syntax { .. })
        ));
        assert_eq!(Pda::parse(b"0 3\n"), Err(PdaError::EmptyGrid));
        assert_eq!(Pda::parse(b"2 0\n"), Err(PdaError::EmptyGrid));
    }

    #[test]
    fn canonicalizes_labels() {
        let p = Pda::parse(b"2 2\n7 *\n* 7").unwrap();
        assert_eq!(p.row(0), &[N(1), X]);
        let q = Pda::parse(b"1 3\n* 9 4").unwrap();
        assert_eq!(q.row(0), &[X, N(1), N(2)]);
    }

    #[test]
    fn validator_reports_condition_b() {
        // Example 1 with entry (1,3) changed from 1 to 3 (one-based).
        let mut rows = ex1().to_rows();
        rows[0][2] = N(3);
        let r = validate_pda(&rows);
        assert!(!r.is_ok());
        assert!(r.violations.contains(&Violation::CrossNotStar {
            symbol: 3,
            rows: (0, 1),
            cols: (2, 3)
        }));
        // Symbol 3 now also shares column 3 with its row-3 occurrence.
        assert!(r.violations.contains(&Violation::SameColumn {
            symbol: 3,
            col: 2,
            rows: (0, 2)
        }));
        assert!(r.violations.iter().any(|v| v.rule() == "b"));
    }

    #[test]
    fn validator_all_star_and_labels() {
        let rows = vec![vec![X; 3]; 3];
        let r = validate_pda(&rows);
        assert!(r.is_ok());
        assert_eq!(r.params.unwrap().s, 0);

        let r = validate_pda(&[vec![N(1), X, N(3)], vec![X, N(1), X]]);
        assert!(r
            .violations
            .contains(&Violation::MissingSymbol { symbol: 2 }));
        assert!(r.is_structurally_ok());

        let r = validate_pda(&[vec![N(2), X], vec![X, N(1)]]);
        assert!(matches!(
            r.violations[0],
            Violation::NonCanonical {
                expected: 1,
                found: 2,
                ..
            }
        ));

        let r = validate_pda(&[vec![X, X], vec![X]]);
        assert_eq!(
            r.violations,
            vec![Violation::Shape {
                row: 1,
                expected: 2,
                found: 1
            }]
        );
    }

    #[test]
    fn example_one_stats() {
        let st = ex1().stats();
        assert_eq!(st.tau, 2);
        assert_eq!(st.regular_g, Some(3));
        assert_eq!(st.theta_at(3), BigRational::from_integer(1.into()));
        assert_eq!(st.storage_load, BigRational::from_integer(2.into()));
        assert!(st.is_comp);
    }

    #[test]
    fn all_star_stats() {
        let p = Pda::from_rows(vec![vec![X; 4]; 2]).unwrap();
        let st = p.stats();
        assert_eq!(st.tau, 4);
        assert_eq!(st.storage_load, BigRational::from_integer(4.into()));
        assert!(st.theta.is_empty());
        assert_eq!(st.regular_g, None);
    }

    #[test]
    fn non_comp_pda_is_flagged() {
        let p = Pda::parse(b"2 2\n1 *\n* 1\n").unwrap();
        assert!(p.stats().is_comp);
        let p = Pda::parse(b"1 2\n1 2\n").unwrap();
        let st = p.stats();
        assert!(!st.is_comp);
        assert_eq!(st.tau, 0);
        assert_eq!(st.regular_g, Some(1));
    }

    #[test]
    fn subarray_of_example_one() {
        let sub = ex1().column_subarray(&[0, 1, 3]).unwrap();
        let expected = vec![
            vec![X, X, N(2)],
            vec![X, N(1), N(3)],
            vec![X, N(2), X],
            vec![N(1), X, N(4)],
            vec![N(2), X, X],
            vec![N(3), N(4), X],
        ];
        assert_eq!(sub.to_rows(), expected);
        assert!(sub.validate().is_structurally_ok());
        assert_eq!(sub.occurrences()[&2], vec![(4, 0), (2, 1), (0, 3)]);

        let full = ex1().column_subarray(&[0, 1, 2, 3]).unwrap();
        assert_eq!(full.to_pda().unwrap(), ex1());
    }

    #[test]
    fn subarray_errors() {
        let p = ex1();
        assert_eq!(p.column_subarray(&[]), Err(PdaError::EmptyNodeSet));
        assert_eq!(
            p.column_subarray(&[4]),
            Err(PdaError::NodeOutOfRange { node: 4, k: 4 })
        );
        assert_eq!(
            p.column_subarray(&[1, 1]),
            Err(PdaError::DuplicateNode { node: 1 })
        );
        // Row 1 is [*,*,1,2]: dropping columns 1 and 2 leaves no star.
        assert_eq!(
            p.column_subarray(&[2, 3]),
            Err(PdaError::EmptyStarRow { row: 0 })
        );
    }
}
