//! Depth-2 `MOD3 o MOD2` and depth-3 `MOD3 o MOD2 o AND2` circuits, and
//! converters between them and character sums.
//!
//! A `MODm` gate outputs 1 iff the bit-sum of its inputs is 0 mod m. A
//! converted circuit accepts `x` iff the character sum vanishes at `x`.
//!
//! Each character `2^l` becomes a `MOD2` gate over the variables of `l`, with
//! one extra `CONST(1)` input when `l` has constant 0, so that the gate outputs
//! exactly `l(x)`. Next to it sits an always-1 companion (`MOD2` over two
//! `CONST(1)`), and the pair adds `l(x) + 1 = 2^l(x)` to the top `MOD3`.

use std::collections::HashMap;
use std::fmt;

use crate::characters::CharacterSum;
use crate::error::{Error, Result};
use crate::forms::QuadraticForm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Gate {
    /// Input variable, 0-based.
    Input(usize),
    Const(bool),
    Mod2(Vec<usize>),
    Mod3(Vec<usize>),
    And2(usize, usize),
}

impl Gate {
    fn args(&self) -> Vec<usize> {
        match self {
            Gate::Input(_) | Gate::Const(_) => Vec::new(),
            Gate::Mod2(a) | Gate::Mod3(a) => a.clone(),
            Gate::And2(a, b) => vec![*a, *b],
        }
    }
}

/// Gates in topological order with a single output gate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    gates: Vec<Gate>,
    output: usize,
}

impl Circuit {
    pub fn new(gates: Vec<Gate>, output: usize) -> Result<Self> {
        if output >= gates.len() {
            return Err(Error::Structural(format!(
                "output g{output} but only {} gates",
                gates.len()
            )));
        }
        for (k, g) in gates.iter().enumerate() {
            if let Some(&bad) = g.args().iter().find(|&&a| a >= k) {
                return Err(Error::Structural(format!(
                    "g{k} reads g{bad}, which is not an earlier gate"
                )));
            }
        }
        Ok(Self { gates, output })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> usize {
        self.output
    }

    /// One past the highest input variable used.
    pub fn num_inputs(&self) -> usize {
        self.gates
            .iter()
            .filter_map(|g| match g {
                Gate::Input(i) => Some(i + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Longest path from an input or constant (depth 0) to the output.
    pub fn depth(&self) -> usize {
        let mut depth = vec![0usize; self.gates.len()];
        for (k, g) in self.gates.iter().enumerate() {
            depth[k] = g.args().iter().map(|&a| depth[a] + 1).max().unwrap_or(0);
        }
        depth[self.output]
    }

    pub fn evaluate(&self, x: &[bool]) -> Result<bool> {
        if x.len() < self.num_inputs() {
            return Err(Error::InputShape(format!(
                "assignment of length {} for a circuit reading x{}",
                x.len(),
                self.num_inputs()
            )));
        }
        let mut val = vec![false; self.gates.len()];
        for (k, g) in self.gates.iter().enumerate() {
            val[k] = match g {
                Gate::Input(i) => x[*i],
                Gate::Const(b) => *b,
                Gate::Mod2(a) => a.iter().filter(|&&i| val[i]).count() % 2 == 0,
                Gate::Mod3(a) => a.iter().filter(|&&i| val[i]).count() % 3 == 0,
                Gate::And2(a, b) => val[*a] && val[*b],
            };
        }
        Ok(val[self.output])
    }

    /// Evaluates at the assignment whose bit `i` is `x(i+1)`.
    pub fn evaluate_index(&self, x: usize, n: usize) -> Result<bool> {
        let bits: Vec<bool> = (0..n).map(|i| x >> i & 1 == 1).collect();
        self.evaluate(&bits)
    }

    /// Reads the `g<k> = KIND(args)` / `output g<k>` netlist format.
    pub fn parse_netlist(text: &str) -> Result<Self> {
        let mut gates = Vec::new();
        let mut output = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse(format!("line {}: {msg}: {line:?}", lineno + 1));
            if output.is_some() {
                return Err(err("gate after output line"));
            }
            if let Some(rest) = line.strip_prefix("output") {
                output = Some(parse_gate_ref(rest.trim()).ok_or_else(|| err("bad output"))?);
                continue;
            }
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| err("expected '='"))?;
            let k = parse_gate_ref(lhs.trim()).ok_or_else(|| err("bad gate name"))?;
            if k != gates.len() {
                return Err(err(&format!("expected g{}", gates.len())));
            }
            let rhs = rhs.trim();
            let (kind, args) = rhs
                .strip_suffix(')')
                .and_then(|r| r.split_once('('))
                .ok_or_else(|| err("expected KIND(args)"))?;
            let args: Vec<&str> = args
                .split(',')
                .map(str::trim)
                .filter(|a| !a.is_empty())
                .collect();
            let refs = || -> Result<Vec<usize>> {
                args.iter()
                    .map(|a| parse_gate_ref(a).ok_or_else(|| err("bad gate reference")))
                    .collect()
            };
            let gate = match kind.trim() {
                "INPUT" => match args.as_slice() {
                    [i] => match i.parse::<usize>() {
                        Ok(v) if v >= 1 => Gate::Input(v - 1),
                        _ => return Err(err("INPUT takes a 1-based variable index")),
                    },
                    _ => return Err(err("INPUT takes one argument")),
                },
                "CONST" => match args.as_slice() {
                    ["0"] => Gate::Const(false),
                    ["1"] => Gate::Const(true),
                    _ => return Err(err("CONST takes 0 or 1")),
                },
                "MOD2" => Gate::Mod2(refs()?),
                "MOD3" => Gate::Mod3(refs()?),
                "AND2" => match refs()?.as_slice() {
                    [a, b] => Gate::And2(*a, *b),
                    _ => return Err(err("AND2 takes exactly two inputs")),
                },
                other => return Err(err(&format!("unknown gate kind {other:?}"))),
            };
            gates.push(gate);
        }
        let output = output.ok_or_else(|| Error::Parse("missing output line".into()))?;
        Circuit::new(gates, output)
    }
}

fn parse_gate_ref(s: &str) -> Option<usize> {
    s.strip_prefix('g')?.parse().ok()
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |a: &[usize]| {
            a.iter()
                .map(|i| format!("g{i}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        for (k, g) in self.gates.iter().enumerate() {
            match g {
                Gate::Input(i) => writeln!(f, "g{k} = INPUT({})", i + 1)?,
                Gate::Const(b) => writeln!(f, "g{k} = CONST({})", u8::from(*b))?,
                Gate::Mod2(a) => writeln!(f, "g{k} = MOD2({})", list(a))?,
                Gate::Mod3(a) => writeln!(f, "g{k} = MOD3({})", list(a))?,
                Gate::And2(a, b) => writeln!(f, "g{k} = AND2(g{a}, g{b})")?,
            }
        }
        write!(f, "output g{}", self.output)
    }
}

fn build(s: &CharacterSum) -> Result<Circuit> {
    let n = s.n();
    let mut gates: Vec<Gate> = (0..n).map(Gate::Input).collect();
    let one = gates.len();
    gates.push(Gate::Const(true));
    let mut ands: HashMap<(usize, usize), usize> = HashMap::new();
    let mut top = Vec::with_capacity(2 * s.weight());
    for q in s.terms() {
        let mut args = Vec::new();
        for (i, j) in q.pairs() {
            let g = *ands.entry((i, j)).or_insert_with(|| {
                gates.push(Gate::And2(i, j));
                gates.len() - 1
            });
            args.push(g);
        }
        args.extend((0..n).filter(|&i| q.linear() >> i & 1 == 1));
        if !q.constant() {
            args.push(one);
        }
        gates.push(Gate::Mod2(args));
        top.push(gates.len() - 1);
        gates.push(Gate::Mod2(vec![one, one]));
        top.push(gates.len() - 1);
    }
    gates.push(Gate::Mod3(top));
    let output = gates.len() - 1;
    Circuit::new(gates, output)
}

/// Depth-2 circuit accepting exactly where the linear character sum is 0.
pub fn characters_to_depth2(s: &CharacterSum) -> Result<Circuit> {
    if let Some(q) = s.terms().iter().find(|q| !q.is_linear()) {
        return Err(Error::InputShape(format!(
            "depth-2 circuits take linear characters only, got {q}"
        )));
    }
    build(s)
}

/// Depth-3 circuit accepting exactly where the character sum is 0; each
/// quadratic term `xi xj` is an `AND2` gate shared across characters.
pub fn characters_to_depth3(s: &CharacterSum) -> Result<Circuit> {
    build(s)
}

pub fn depth2_to_characters(c: &Circuit) -> Result<CharacterSum> {
    extract(c, false)
}

pub fn depth3_to_characters(c: &Circuit) -> Result<CharacterSum> {
    extract(c, true)
}

// Reads a MOD3 of MOD2 gates back into characters. A MOD2 gate with form `f`
// over its variables and `k` constant-1 inputs outputs the bit
// `g = f + k + 1`, and `g = 2^g - 1` in Z3, so the MOD3 bit-sum equals
// `sum 2^g` plus a constant that is folded in as extra constant characters.
fn extract(c: &Circuit, allow_and: bool) -> Result<CharacterSum> {
    let n = c.num_inputs().max(1);
    let gates = c.gates();
    let Gate::Mod3(top) = &gates[c.output()] else {
        return Err(Error::UnsupportedTopology(
            "output is not a MOD3 gate".into(),
        ));
    };
    let mut terms = Vec::new();
    let mut constant_bits: i64 = 0;
    for &g in top {
        match &gates[g] {
            Gate::Const(b) => constant_bits += i64::from(*b),
            Gate::Mod2(args) => {
                let mut f = QuadraticForm::zero(n);
                let mut flip = true;
                for &a in args {
                    match &gates[a] {
                        Gate::Input(i) => {
                            f = f.add(&QuadraticForm::from_terms(n, &[], &[*i], false)?)?
                        }
                        Gate::Const(b) => flip ^= *b,
                        Gate::And2(p, q) if allow_and => match (&gates[*p], &gates[*q]) {
                            (Gate::Input(i), Gate::Input(j)) => {
                                f =
                                    f.add(&QuadraticForm::from_terms(n, &[(*i, *j)], &[], false)?)?
                            }
                            _ => {
                                return Err(Error::UnsupportedTopology(format!(
                                    "AND2 g{a} must read two INPUT gates"
                                )))
                            }
                        },
                        other => {
                            return Err(Error::UnsupportedTopology(format!(
                                "MOD2 g{g} reads unsupported gate {other:?}"
                            )))
                        }
                    }
                }
                if flip {
                    f = f.complement();
                }
                if f == QuadraticForm::one(n) {
                    constant_bits += 1;
                } else {
                    terms.push(f);
                    constant_bits -= 1;
                }
            }
            other => {
                return Err(Error::UnsupportedTopology(format!(
                    "MOD3 input g{g} is {other:?}, expected MOD2 or CONST"
                )))
            }
        }
    }
    match constant_bits.rem_euclid(3) {
        1 => terms.push(QuadraticForm::zero(n)),
        2 => terms.push(QuadraticForm::one(n)),
        _ => {}
    }
    CharacterSum::new(n, terms)
}
