//! Line-oriented block syntax shared by every file format.

use std::fmt;

/// A load or parse failure, located by file and 1-based line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadError {
    pub file: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}: {}", self.file, self.message)
        } else {
            write!(f, "{}:{}: {}", self.file, self.line, self.message)
        }
    }
}

impl std::error::Error for LoadError {}

#[derive(Debug, Clone)]
pub struct Line {
    pub number: usize,
    pub tokens: Vec<String>,
}

impl Line {
    /// Tokens from `from` on, joined by single spaces.
    pub fn rest(&self, from: usize) -> String {
        self.tokens.get(from..).map(|t| t.join(" ")).unwrap_or_default()
    }
}

/// A block `KIND NAME ... end` with its body lines.
#[derive(Debug, Clone)]
pub struct Block {
    pub file: String,
    pub header: Line,
    pub body: Vec<Line>,
}

impl Block {
    pub fn kind(&self) -> &str {
        &self.header.tokens[0]
    }

    pub fn name(&self) -> &str {
        &self.header.tokens[1]
    }

    pub fn error(&self, line: usize, message: impl Into<String>) -> LoadError {
        LoadError {
            file: self.file.clone(),
            line,
            message: message.into(),
        }
    }
}

/// Splits a line into tokens. A line whose first token starts with `#`, or a
/// lone `#` token, starts a comment.
pub fn tokenize(line: &str) -> Vec<String> {
    let mut out = Vec::new();
    for (i, t) in line.split_whitespace().enumerate() {
        if t == "#" || (i == 0 && t.starts_with('#')) {
            break;
        }
        out.push(t.to_string());
    }
    out
}

pub const KINDS: [&str; 5] = ["automaton", "group", "demonstration", "cosettable", "presentation"];

pub fn parse_blocks(file: &str, text: &str) -> Result<Vec<Block>, LoadError> {
    let err = |line: usize, message: String| LoadError {
        file: file.to_string(),
        line,
        message,
    };
    let mut blocks = Vec::new();
    let mut current: Option<Block> = None;
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let line = Line { number, tokens };
        match current.as_mut() {
            None => {
                let kind = line.tokens[0].as_str();
                if !KINDS.contains(&kind) {
                    return Err(err(number, format!("expected a block keyword, found {kind:?}")));
                }
                if line.tokens.len() < 2 {
                    return Err(err(number, format!("{kind} block needs a name")));
                }
                current = Some(Block {
                    file: file.to_string(),
                    header: line,
                    body: Vec::new(),
                });
            }
            Some(b) => {
                if line.tokens[0] == "end" {
                    if line.tokens.len() > 1 {
                        return Err(err(number, "unexpected tokens after `end`".into()));
                    }
                    blocks.push(current.take().unwrap());
                } else {
                    b.body.push(line);
                }
            }
        }
    }
    if let Some(b) = current {
        return Err(err(b.header.number, format!("{} block {} has no `end`", b.kind(), b.name())));
    }
    Ok(blocks)
}
