//! Line-oriented circuit description.
//!
//! ```text
//! modes <label>...
//! source pdc2 <a> <b>
//! hwp <mode>
//! bs <in> -> <out_t> <out_r> <+|->
//! pbs <in1> <in2> -> <outH1> <outV1>
//! postselect <mode>...
//! ```
//!
//! `#` starts a comment. A beam splitter's auxiliary vacuum port is named
//! `<in>.aux` and declared implicitly. Modes must be declared before use.

use std::fmt;

use fockbell::optics::{
    aux_port, beam_splitter, half_wave_plate, polarizing_beam_splitter, BsSign,
};
use fockbell::postselect::{CoincidencePattern, Pipeline};
use fockbell::{Circuit64, FockState64, LinearElement64};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SourceKind {
    /// Second-order emission of a polarization-entangled pair source.
    Pdc2 { a: String, b: String },
}

impl SourceKind {
    pub fn state(&self) -> fockbell::Result<FockState64> {
        match self {
            SourceKind::Pdc2 { a, b } => FockState64::pdc_second_order(a, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitFile {
    pub circuit: Circuit64,
    pub source: SourceKind,
    pub pattern: CoincidencePattern,
}

impl CircuitFile {
    pub fn pipeline(&self) -> fockbell::Result<Pipeline<f64>> {
        Ok(Pipeline {
            source: self.source.state()?,
            circuit: self.circuit.clone(),
            pattern: self.pattern.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseError {
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    UndeclaredMode {
        line: usize,
        column: usize,
        label: String,
    },
    Mode {
        line: usize,
        message: String,
    },
    NoSource,
    NoPostselect,
    Circuit(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax {
                line,
                column,
                message,
            } => {
                write!(f, "{line}:{column}: syntax error: {message}")
            }
            ParseError::UndeclaredMode {
                line,
                column,
                label,
            } => {
                write!(f, "{line}:{column}: undeclared mode `{label}`")
            }
            ParseError::Mode { line, message } => write!(f, "{line}: {message}"),
            ParseError::NoSource => f.write_str("no source declared"),
            ParseError::NoPostselect => f.write_str("no postselect declared"),
            ParseError::Circuit(message) => write!(f, "invalid circuit: {message}"),
        }
    }
}

impl std::error::Error for ParseError {}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in code.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &code[s..i],
                    column: code[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &code[s..],
            column: code[..s].chars().count() + 1,
        });
    }
    tokens
}

struct Parser {
    declared: Vec<String>,
    elements: Vec<LinearElement64>,
    source: Option<SourceKind>,
    pattern: Option<CoincidencePattern>,
    line: usize,
}

impl Parser {
    fn syntax(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn declare(&mut self, label: &str) {
        if !self.declared.iter().any(|d| d == label) {
            self.declared.push(label.to_string());
        }
    }

    fn label<'a>(&self, tok: &Token<'a>) -> Result<&'a str, ParseError> {
        if self.declared.iter().any(|d| d == tok.text) {
            Ok(tok.text)
        } else {
            Err(ParseError::UndeclaredMode {
                line: self.line,
                column: tok.column,
                label: tok.text.to_string(),
            })
        }
    }

    fn expect_arity(&self, tokens: &[Token], n: usize, usage: &str) -> Result<(), ParseError> {
        if tokens.len() != n {
            let column = tokens.get(n).or(tokens.last()).map_or(1, |t| t.column);
            return Err(self.syntax(column, format!("expected `{usage}`")));
        }
        Ok(())
    }

    fn expect_arrow(&self, tok: &Token) -> Result<(), ParseError> {
        if tok.text != "->" {
            return Err(self.syntax(tok.column, format!("expected `->`, found `{}`", tok.text)));
        }
        Ok(())
    }

    fn mode_error(&self, e: fockbell::Error) -> ParseError {
        ParseError::Mode {
            line: self.line,
            message: e.to_string(),
        }
    }

    fn directive(&mut self, tokens: &[Token]) -> Result<(), ParseError> {
        let head = &tokens[0];
        match head.text {
            "modes" => {
                if tokens.len() < 2 {
                    return Err(self.syntax(head.column, "`modes` needs at least one label"));
                }
                for t in &tokens[1..] {
                    if t.text == "->" {
                        return Err(self.syntax(t.column, "`->` is not a mode label"));
                    }
                    self.declare(t.text);
                }
            }
            "source" => {
                self.expect_arity(tokens, 4, "source pdc2 <a> <b>")?;
                if tokens[1].text != "pdc2" {
                    return Err(self.syntax(
                        tokens[1].column,
                        format!("unknown source `{}`", tokens[1].text),
                    ));
                }
                if self.source.is_some() {
                    return Err(self.syntax(head.column, "source declared twice"));
                }
                let a = self.label(&tokens[2])?.to_string();
                let b = self.label(&tokens[3])?.to_string();
                if a == b {
                    return Err(ParseError::Mode {
                        line: self.line,
                        message: format!("source ports must differ, got `{a}` twice"),
                    });
                }
                self.source = Some(SourceKind::Pdc2 { a, b });
            }
            "hwp" => {
                self.expect_arity(tokens, 2, "hwp <mode>")?;
                let target = self.label(&tokens[1])?;
                self.elements.push(half_wave_plate(target));
            }
            "bs" => {
                self.expect_arity(tokens, 6, "bs <in> -> <out_t> <out_r> <+|->")?;
                let input = self.label(&tokens[1])?;
                self.expect_arrow(&tokens[2])?;
                let out_t = self.label(&tokens[3])?;
                let out_r = self.label(&tokens[4])?;
                let sign = match tokens[5].text {
                    "+" => BsSign::Plus,
                    "-" => BsSign::Minus,
                    other => {
                        return Err(self.syntax(
                            tokens[5].column,
                            format!("expected `+` or `-`, found `{other}`"),
                        ))
                    }
                };
                let aux = aux_port(input);
                self.declare(&aux);
                let bs = beam_splitter(input, &aux, out_t, out_r, sign)
                    .map_err(|e| self.mode_error(e))?;
                self.elements.push(bs);
            }
            "pbs" => {
                self.expect_arity(tokens, 6, "pbs <in1> <in2> -> <outH1> <outV1>")?;
                let in1 = self.label(&tokens[1])?;
                let in2 = self.label(&tokens[2])?;
                self.expect_arrow(&tokens[3])?;
                let out_h = self.label(&tokens[4])?;
                let out_v = self.label(&tokens[5])?;
                let pbs = polarizing_beam_splitter(in1, in2, out_h, out_v)
                    .map_err(|e| self.mode_error(e))?;
                self.elements.push(pbs);
            }
            "postselect" => {
                if tokens.len() < 2 {
                    return Err(self.syntax(head.column, "`postselect` needs at least one mode"));
                }
                if self.pattern.is_some() {
                    return Err(self.syntax(head.column, "postselect declared twice"));
                }
                let labels = tokens[1..]
                    .iter()
                    .map(|t| self.label(t))
                    .collect::<Result<Vec<_>, _>>()?;
                let pattern = CoincidencePattern::new(labels).map_err(|e| self.mode_error(e))?;
                self.pattern = Some(pattern);
            }
            other => return Err(self.syntax(head.column, format!("unknown directive `{other}`"))),
        }
        Ok(())
    }
}

/// Parses a circuit description into its circuit, source and coincidence pattern.
pub fn parse_circuit_file(text: &str) -> Result<CircuitFile, ParseError> {
    let mut parser = Parser {
        declared: Vec::new(),
        elements: Vec::new(),
        source: None,
        pattern: None,
        line: 0,
    };
    for (i, line) in text.lines().enumerate() {
        parser.line = i + 1;
        let tokens = tokenize(line);
        if !tokens.is_empty() {
            parser.directive(&tokens)?;
        }
    }
    let source = parser.source.ok_or(ParseError::NoSource)?;
    let pattern = parser.pattern.ok_or(ParseError::NoPostselect)?;
    let circuit = Circuit64::new(parser.declared, parser.elements)
        .map_err(|e| ParseError::Circuit(e.to_string()))?;
    Ok(CircuitFile {
        circuit,
        source,
        pattern,
    })
}
