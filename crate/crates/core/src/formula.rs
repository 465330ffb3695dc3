use std::fmt;
use std::str::FromStr;

use crate::error::FormulaError;

/// Positive CNF over variables `1..=k`. Clauses keep their input order;
/// literals inside a clause are sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Formula {
    k: usize,
    clauses: Vec<Vec<usize>>,
}

impl Formula {
    pub fn new(k: usize, clauses: Vec<Vec<usize>>) -> Result<Formula, FormulaError> {
        if clauses.is_empty() {
            return Err(FormulaError::NoClauses);
        }
        let mut normalized = Vec::with_capacity(clauses.len());
        for (j, mut clause) in clauses.into_iter().enumerate() {
            if clause.is_empty() {
                return Err(FormulaError::Parse { line: j + 1, message: "empty clause".into() });
            }
            clause.sort_unstable();
            clause.dedup();
            if let Some(&bad) = clause.iter().find(|&&x| x == 0 || x > k) {
                return Err(FormulaError::VariableOutOfRange(bad));
            }
            normalized.push(clause);
        }
        Ok(Formula { k, clauses: normalized })
    }

    /// One clause per line of whitespace-separated positive integers. `#`
    /// starts a comment, blank lines are skipped, and a `p <k>` line sets the
    /// variable count (otherwise the largest index).
    pub fn parse(text: &str) -> Result<Formula, FormulaError> {
        let mut header_k = None;
        let mut clauses = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| FormulaError::Parse { line: line_no, message };
            let mut words = line.split_whitespace().peekable();
            if words.peek() == Some(&"p") {
                words.next();
                let k = words
                    .next()
                    .ok_or_else(|| err("`p` needs a variable count".into()))?
                    .parse::<usize>()
                    .map_err(|e| err(format!("bad variable count: {e}")))?;
                if words.next().is_some() {
                    return Err(err("trailing text after `p <k>`".into()));
                }
                if header_k.replace(k).is_some() {
                    return Err(err("duplicate `p` header".into()));
                }
                continue;
            }
            let mut clause = Vec::new();
            for word in words {
                let x: i64 = word.parse().map_err(|_| err(format!("`{word}` is not a variable index")))?;
                if x <= 0 {
                    return Err(err(format!("variable indices start at 1, got {x}")));
                }
                clause.push(x as usize);
            }
            clauses.push((line_no, clause));
        }
        let max = clauses.iter().flat_map(|(_, c)| c.iter().copied()).max().unwrap_or(0);
        let k = match header_k {
            Some(k) if k < max => {
                return Err(FormulaError::Parse {
                    line: 0,
                    message: format!("header declares {k} variables but X{max} is used"),
                })
            }
            Some(k) => k,
            None => max,
        };
        Formula::new(k, clauses.into_iter().map(|(_, c)| c).collect())
    }

    /// Variable count.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Clause count.
    pub fn n(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<usize>] {
        &self.clauses
    }

    /// Clause `j` (1-based) contains variable `i` (1-based).
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.clauses[j - 1].binary_search(&i).is_ok()
    }

    /// Text form accepted by [`Formula::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("p {}\n", self.k);
        for c in &self.clauses {
            let words: Vec<String> = c.iter().map(usize::to_string).collect();
            out.push_str(&words.join(" "));
            out.push('\n');
        }
        out
    }
}

impl FromStr for Formula {
    type Err = FormulaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Formula::parse(s)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> = c.iter().map(|i| format!("X{i}")).collect();
                format!("({})", lits.join(" ∨ "))
            })
            .collect();
        f.write_str(&parts.join(" ∧ "))
    }
}
