//! Permutation groups and programs over them.
//!
//! `G72` is realized on the nine points of `Z3 x Z3`, point `(u, v)` having
//! index `3u + v`; `S3` acts on three points. Products read left to right:
//! `g.mul(&h)` applies `g` first.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{check_dims, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InputShape(format!("{images:?} is not a bijection")));
            }
        }
        Ok(Self { images })
    }

    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` then `other`.
    pub fn mul(&self, other: &Permutation) -> Result<Permutation> {
        check_dims(self.degree(), other.degree())?;
        Ok(Self {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Self { images }
    }

    pub fn pow(&self, k: usize) -> Permutation {
        (0..k).fold(Self::identity(self.degree()), |acc, _| {
            acc.mul(self).expect("same degree")
        })
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.mul(self).expect("same degree");
            k += 1;
        }
        k
    }

    /// Parses 1-based cycle notation such as `"(1 2 3)(4 5)"` or `"()"`.
    /// Cycles without spaces, `"(123)"`, read one digit per point.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut moved = vec![false; degree];
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body_end = rest
                .find(')')
                .filter(|_| rest.starts_with('('))
                .ok_or_else(|| Error::Parse(format!("bad cycle notation {s:?}")))?;
            let body = rest[1..body_end].trim();
            rest = rest[body_end + 1..].trim_start();
            let points: Vec<usize> = if body.contains(char::is_whitespace) || body.contains(',') {
                body.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::Parse(format!("cycle {body:?}: {e}")))?
            } else {
                body.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::Parse(format!("cycle {body:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            let mut cycle_images = images.clone();
            for (k, &p) in points.iter().enumerate() {
                if p == 0 || p > degree {
                    return Err(Error::OutOfRange(format!("point {p} of degree {degree}")));
                }
                if std::mem::replace(&mut moved[p - 1], true) {
                    return Err(Error::Parse(format!("point {p} repeated in {s:?}")));
                }
                cycle_images[p - 1] = points[(k + 1) % points.len()] - 1;
            }
            images = cycle_images;
        }
        Self::new(images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("()");
        }
        let mut seen = vec![false; self.degree()];
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push((p + 1).to_string());
                p = self.images[p];
            }
            write!(f, "({})", cycle.join(" "))?;
        }
        Ok(())
    }
}

/// All products of the generators, found breadth first.
pub fn closure(generators: &[Permutation]) -> Result<Vec<Permutation>> {
    let Some(first) = generators.first() else {
        return Err(Error::InputShape("closure of no generators".into()));
    };
    let id = Permutation::identity(first.degree());
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for h in generators {
            let gh = g.mul(h)?;
            if seen.insert(gh.clone()) {
                order.push(gh.clone());
                queue.push_back(gh);
            }
        }
    }
    Ok(order)
}

const Z3: [usize; 3] = [0, 1, 2];

fn z3_action(f: impl Fn(usize, usize) -> (usize, usize)) -> Permutation {
    let images = Z3
        .iter()
        .flat_map(|&u| Z3.iter().map(move |&v| (u, v)))
        .map(|(u, v)| {
            let (s, t) = f(u, v);
            3 * (s % 3) + t % 3
        })
        .collect();
    Permutation::new(images).expect("affine maps of Z3 x Z3 are bijective")
}

/// The five generators `a, b, c, d, e` of `G72` acting on `Z3 x Z3`.
pub fn g72_generators() -> [Permutation; 5] {
    [
        z3_action(|u, v| (u + 1, v)),
        z3_action(|u, v| (u, v + 1)),
        z3_action(|u, v| (v, u)),
        z3_action(|u, v| (3 - u, v)),
        z3_action(|u, v| (u, 3 - v)),
    ]
}

/// `(1 2)` and `(1 2 3)`.
pub fn s3_generators() -> [Permutation; 2] {
    [
        Permutation::new(vec![1, 0, 2]).expect("transposition"),
        Permutation::new(vec![1, 2, 0]).expect("3-cycle"),
    ]
}

/// A defining relation `lhs = rhs` between words in the generators.
#[derive(Debug, Clone, Copy)]
pub struct Relation {
    pub lhs: &'static str,
    pub rhs: &'static str,
}

const fn rel(lhs: &'static str, rhs: &'static str) -> Relation {
    Relation { lhs, rhs }
}

/// Defining relations of `G72`.
pub const G72_RELATIONS: [Relation; 12] = [
    rel("aaa", "1"),
    rel("bbb", "1"),
    rel("ab", "ba"),
    rel("cc", "1"),
    rel("cac", "b"),
    rel("cdc", "e"),
    rel("dd", "1"),
    rel("dad", "aa"),
    rel("db", "bd"),
    rel("ee", "1"),
    rel("ebe", "bb"),
    rel("ea", "ae"),
];

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Checks each relation against the `G72` generators.
pub fn check_g72_relations() -> Vec<(Relation, bool)> {
    G72_RELATIONS
        .iter()
        .map(|&r| {
            let holds = match (Group::G72.parse_word(r.lhs), Group::G72.parse_word(r.rhs)) {
                (Ok(l), Ok(rr)) => l == rr,
                _ => false,
            };
            (r, holds)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    G72,
    S3,
}

impl Group {
    pub fn degree(self) -> usize {
        match self {
            Group::G72 => 9,
            Group::S3 => 3,
        }
    }

    pub fn generators(self) -> Vec<Permutation> {
        match self {
            Group::G72 => g72_generators().to_vec(),
            Group::S3 => s3_generators().to_vec(),
        }
    }

    pub fn identity(self) -> Permutation {
        Permutation::identity(self.degree())
    }

    /// A word is cycle notation, `"1"` for the identity, or (for `G72`) a
    /// string of generator letters `a`..`e` multiplied left to right.
    pub fn parse_word(self, word: &str) -> Result<Permutation> {
        let word = word.trim();
        if word == "1" {
            return Ok(self.identity());
        }
        if word.starts_with('(') {
            return Permutation::parse_cycles(word, self.degree());
        }
        if self == Group::S3 {
            return Err(Error::Parse(format!(
                "S3 elements use cycle notation, got {word:?}"
            )));
        }
        let gens = g72_generators();
        word.chars().try_fold(self.identity(), |acc, ch| {
            let k = match ch {
                'a'..='e' => ch as usize - 'a' as usize,
                _ => {
                    return Err(Error::Parse(format!(
                        "unknown generator {ch:?} in {word:?}"
                    )))
                }
            };
            acc.mul(&gens[k])
        })
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "g72" => Ok(Group::G72),
            "s3" => Ok(Group::S3),
            other => Err(Error::Parse(format!("unknown group {other:?}"))),
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::G72 => "g72",
            Group::S3 => "s3",
        })
    }
}

/// Reads input bit `bit` (0-based) and emits `zero` or `one`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instruction {
    pub bit: usize,
    pub zero: Permutation,
    pub one: Permutation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    group: Group,
    instructions: Vec<Instruction>,
    accepting: Vec<Permutation>,
}

impl Program {
    pub fn new(
        group: Group,
        instructions: Vec<Instruction>,
        accepting: Vec<Permutation>,
    ) -> Result<Self> {
        let d = group.degree();
        for ins in &instructions {
            check_dims(d, ins.zero.degree())?;
            check_dims(d, ins.one.degree())?;
        }
        for g in &accepting {
            check_dims(d, g.degree())?;
        }
        Ok(Self {
            group,
            instructions,
            accepting,
        })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn accepting(&self) -> &[Permutation] {
        &self.accepting
    }

    /// Number of instructions.
    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Smallest input length covering every bit the program reads.
    pub fn input_width(&self) -> usize {
        self.instructions
            .iter()
            .map(|i| i.bit + 1)
            .max()
            .unwrap_or(0)
    }

    /// Parses the line format
    ///
    /// ```text
    /// group=g72
    /// accept=1,aa
    /// bit=1 zero=1 one=a
    /// ```
    ///
    /// with 1-based bits. `group` defaults to `g72` and `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut group = Group::G72;
        let mut accept_words: Vec<String> = Vec::new();
        let mut raw = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| Error::Parse(format!("line {}: {m}", lineno + 1));
            if let Some(g) = line.strip_prefix("group=") {
                if !raw.is_empty() || !accept_words.is_empty() {
                    return Err(err("group= must come first"));
                }
                group = g.parse()?;
            } else if let Some(a) = line.strip_prefix("accept=") {
                accept_words.extend(
                    a.split(',')
                        .map(str::trim)
                        .filter(|w| !w.is_empty())
                        .map(String::from),
                );
            } else if let Some(rest) = line.strip_prefix("bit=") {
                let (bit, rest) = rest
                    .split_once("zero=")
                    .ok_or_else(|| err("missing zero="))?;
                let (zero, one) = rest.split_once("one=").ok_or_else(|| err("missing one="))?;
                let bit: usize = bit
                    .trim()
                    .parse()
                    .map_err(|e| err(&format!("bit index: {e}")))?;
                if bit == 0 {
                    return Err(err("bits are numbered from 1"));
                }
                raw.push((bit - 1, zero.trim().to_string(), one.trim().to_string()));
            } else {
                return Err(err(&format!("unrecognized line {line:?}")));
            }
        }
        let instructions = raw
            .into_iter()
            .map(|(bit, z, o)| {
                Ok(Instruction {
                    bit,
                    zero: group.parse_word(&z)?,
                    one: group.parse_word(&o)?,
                })
            })
            .collect::<Result<_>>()?;
        let accepting = accept_words
            .iter()
            .map(|w| group.parse_word(w))
            .collect::<Result<_>>()?;
        Program::new(group, instructions, accepting)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group={}", self.group)?;
        let acc: Vec<String> = self.accepting.iter().map(|g| g.to_string()).collect();
        write!(f, "accept={}", acc.join(","))?;
        for ins in &self.instructions {
            write!(f, "\nbit={} zero={} one={}", ins.bit + 1, ins.zero, ins.one)?;
        }
        Ok(())
    }
}

/// Left-to-right product of the instruction outputs, and whether it lies in
/// the accepting set.
pub fn eval_program(p: &Program, input: &[bool]) -> Result<(Permutation, bool)> {
    if input.len() < p.input_width() {
        return Err(Error::OutOfRange(format!(
            "program reads bit {} of a {}-bit input",
            p.input_width(),
            input.len()
        )));
    }
    let product = p
        .instructions
        .iter()
        .try_fold(p.group.identity(), |acc, ins| {
            acc.mul(if input[ins.bit] { &ins.one } else { &ins.zero })
        })?;
    let accepted = p.accepting.contains(&product);
    Ok((product, accepted))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation() {
        let p = Permutation::parse_cycles("(2 3 1)", 3).unwrap();
        assert_eq!(p.apply(0), 1);
        assert_eq!(p.apply(1), 2);
        assert_eq!(p.apply(2), 0);
        assert_eq!(p.to_string(), "(1 2 3)");
        assert_eq!(Permutation::parse_cycles("(231)", 3).unwrap(), p);
        assert_eq!(
            Permutation::parse_cycles("()", 3).unwrap().to_string(),
            "()"
        );
        assert!(Permutation::parse_cycles("(1 4)", 3).is_err());
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 3).is_err());
        assert!(Permutation::parse_cycles("1 2", 3).is_err());
    }

    #[test]
    fn multiplication() {
        let [t, r] = s3_generators();
        assert_eq!(t.mul(&Permutation::identity(3)).unwrap(), t);
        // (1 2) then (1 2 3): 1 -> 2 -> 3
        assert_eq!(t.mul(&r).unwrap().apply(0), 2);
        assert!(r.mul(&r.inverse()).unwrap().is_identity());
        assert_eq!(r.order(), 3);
        assert!(t.mul(&Permutation::identity(4)).is_err());
        assert!(Permutation::new(vec![0, 0]).is_err());
    }

    #[test]
    fn g72_relations_and_order() {
        for (r, ok) in check_g72_relations() {
            assert!(ok, "{r}");
        }
        assert_eq!(closure(&g72_generators()).unwrap().len(), 72);
        assert_eq!(closure(&s3_generators()).unwrap().len(), 6);
    }

    #[test]
    fn relation_examples() {
        let [a, b, c, d, e] = g72_generators();
        assert!(a.pow(3).is_identity());
        assert_eq!(c.mul(&a).unwrap().mul(&c).unwrap(), b);
        assert_eq!(c.mul(&d).unwrap().mul(&c).unwrap(), e);
    }

    #[test]
    fn programs() {
        let empty = Program::new(Group::G72, vec![], vec![Group::G72.identity()]).unwrap();
        let (g, acc) = eval_program(&empty, &[]).unwrap();
        assert!(g.is_identity() && acc);

        let p = Program::parse("group=g72\naccept=a\nbit=1 zero=1 one=a").unwrap();
        let (g, acc) = eval_program(&p, &[true]).unwrap();
        assert_eq!(g, g72_generators()[0]);
        assert!(acc);
        assert!(eval_program(&p, &[]).is_err());

        let cube =
            Program::parse("accept=1\nbit=1 zero=a one=a\nbit=1 zero=a one=a\nbit=1 zero=a one=a")
                .unwrap();
        assert!(eval_program(&cube, &[false]).unwrap().1);
        assert!(eval_program(&cube, &[true]).unwrap().0.is_identity());
    }

    #[test]
    fn s3_program_text_round_trip() {
        let text =
            "group=s3\naccept=(1 2 3)\nbit=2 zero=() one=(1 2)\nbit=1 zero=(1 3) one=(1 2 3)";
        let p = Program::parse(text).unwrap();
        assert_eq!(p.to_string(), text);
        assert_eq!(p.len(), 2);
        assert_eq!(p.input_width(), 2);
        assert!(Program::parse("group=s3\nbit=1 zero=a one=1").is_err());
        assert!(Program::parse("bit=0 zero=1 one=1").is_err());
    }
}
