//! Runtime form of the frame rules, for signatures only known at run time
//! and for reporting. Static expressions never call into this module while
//! evaluating.

use std::fmt;

/// A frame label as seen at run time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Unframed,
    Named(&'static str),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Unframed => f.write_str("_"),
            Label::Named(n) => f.write_str(n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameSignature {
    /// Group element `Φ_AB`.
    Pair(Label, Label),
    /// Vector or tangent element `p^D_AB`.
    Triple(Label, Label, Label),
}

impl FrameSignature {
    pub fn labels(&self) -> Vec<Label> {
        match *self {
            FrameSignature::Pair(a, b) => vec![a, b],
            FrameSignature::Triple(d, a, b) => vec![d, a, b],
        }
    }

    fn from_labels(l: &[Label]) -> Self {
        match *l {
            [a, b] => FrameSignature::Pair(a, b),
            [d, a, b] => FrameSignature::Triple(d, a, b),
            _ => unreachable!("rule output patterns have two or three labels"),
        }
    }
}

impl fmt::Display for FrameSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrameSignature::Pair(a, b) => write!(f, "({a},{b})"),
            FrameSignature::Triple(d, a, b) => write!(f, "({d},{a},{b})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operation {
    Sum,
    Negative,
    Difference,
    Scaling,
    Composition,
    Inverse,
    Rotation,
    Transformation,
    BoxPlus,
    BoxMinus,
    Exp,
    /// Log map with its explicit target label.
    Log(Label),
}

struct Rule {
    name: &'static str,
    expected: &'static str,
    inputs: &'static [&'static str],
    output: &'static str,
}

impl Operation {
    pub const ALL: [Operation; 12] = [
        Operation::Sum,
        Operation::Negative,
        Operation::Difference,
        Operation::Scaling,
        Operation::Composition,
        Operation::Inverse,
        Operation::Rotation,
        Operation::Transformation,
        Operation::BoxPlus,
        Operation::BoxMinus,
        Operation::Exp,
        Operation::Log(Label::Unframed),
    ];

    fn rule(&self) -> Rule {
        let (name, expected, inputs, output): (_, _, &'static [&'static str], _) = match self {
            Operation::Sum => ("Sum", "p^D_AB + p^D_BC", &["DAB", "DBC"], "DAC"),
            Operation::Negative => ("Negative", "-p^D_AB", &["DAB"], "DBA"),
            Operation::Difference => ("Difference", "p^D_AC - p^D_BC", &["DAC", "DBC"], "DAB"),
            Operation::Scaling => ("Scaling", "a p^A_BC", &["ABC"], "ABC"),
            Operation::Composition => ("Composition", "Φ_AB ∘ Φ_BC", &["AB", "BC"], "AC"),
            Operation::Inverse => ("Inverse", "(Φ_AB)^-1", &["AB"], "BA"),
            Operation::Rotation => ("Rotation", "Φ_DA(p^A_BC)", &["DA", "ABC"], "DBC"),
            Operation::Transformation => ("Transformation", "T_AB(p^B_BC)", &["AB", "BBC"], "AAC"),
            Operation::BoxPlus => ("Manifold plus", "Φ_AB ⊞ φ^A_AB", &["AB", "AAB"], "AB"),
            Operation::BoxMinus => ("Manifold minus", "Φ_AB ⊟ Φ_AB", &["AB", "AB"], "AAB"),
            Operation::Exp => ("Exp map", "exp(φ^A_AB)", &["AAB"], "AA"),
            // `X` is bound to the explicit target label.
            Operation::Log(_) => ("Log map", "log_X(Φ_AA)", &["AA"], "AAX"),
        };
        Rule {
            name,
            expected,
            inputs,
            output,
        }
    }

    pub fn name(&self) -> &'static str {
        self.rule().name
    }

    pub fn arity(&self) -> usize {
        self.rule().inputs.len()
    }
}

/// Operand index and label slot of a descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub operand: usize,
    pub slot: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = ["lhs", "rhs"].get(self.operand).copied().unwrap_or("arg");
        write!(f, "{side}[{}]", self.slot)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    /// Two descriptors the rule requires to be equal differ. `first` is
    /// where the shared descriptor was first bound.
    Mismatch { first: Position, second: Position },
    /// Wrong number of operands or wrong signature arity.
    Arity,
    /// Unframed and named labels in one operation.
    Mixed,
}

/// A rejected operation.
///
/// Displays as `rule=<name> expected=<pattern> got=<sig>, <sig>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    pub expected: &'static str,
    pub operands: Vec<FrameSignature>,
    /// Target label of a log map, shown as the last operand.
    pub log_target: Option<Label>,
    pub problems: Vec<Problem>,
}

impl Violation {
    /// Mismatched descriptor positions.
    pub fn positions(&self) -> Vec<(Position, Position)> {
        self.problems
            .iter()
            .filter_map(|p| match p {
                Problem::Mismatch { first, second } => Some((*first, *second)),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule={} expected={} got=", self.rule, self.expected)?;
        for (i, s) in self.operands.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        if let Some(t) = self.log_target {
            write!(f, ", {t}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Violation {}

fn unify(
    inputs: &[&str],
    operands: &[FrameSignature],
    preset: Option<(char, Label)>,
) -> Result<Vec<(char, Label)>, Vec<Problem>> {
    let mut bound: Vec<(char, Label, Option<Position>)> = Vec::new();
    if let Some((v, l)) = preset {
        bound.push((v, l, None));
    }
    let mut problems = Vec::new();
    for (operand, (pattern, sig)) in inputs.iter().zip(operands).enumerate() {
        let labels = sig.labels();
        if labels.len() != pattern.chars().count() {
            return Err(vec![Problem::Arity]);
        }
        for (slot, (var, label)) in pattern.chars().zip(labels).enumerate() {
            let here = Position { operand, slot };
            match bound.iter().find(|(v, _, _)| *v == var) {
                Some(&(_, l, first)) if l != label => problems.push(Problem::Mismatch {
                    first: first.unwrap_or(here),
                    second: here,
                }),
                Some(_) => {}
                None => bound.push((var, label, Some(here))),
            }
        }
    }
    if problems.is_empty() {
        Ok(bound.into_iter().map(|(v, l, _)| (v, l)).collect())
    } else {
        Err(problems)
    }
}

fn instantiate(output: &str, bindings: &[(char, Label)]) -> FrameSignature {
    let labels: Vec<Label> = output
        .chars()
        .map(|c| {
            bindings
                .iter()
                .find(|(v, _)| *v == c)
                .map(|(_, l)| *l)
                .expect("output variables appear in the inputs")
        })
        .collect();
    FrameSignature::from_labels(&labels)
}

/// Checks one operation against its rule and returns the result signature.
///
/// Sums are commutative: `p^D_BC + p^D_AB` is accepted as well.
pub fn check_rule(op: Operation, operands: &[FrameSignature]) -> Result<FrameSignature, Violation> {
    let rule = op.rule();
    let log_target = match op {
        Operation::Log(t) => Some(t),
        _ => None,
    };
    let violation = |problems| Violation {
        rule: rule.name,
        expected: rule.expected,
        operands: operands.to_vec(),
        log_target,
        problems,
    };
    if operands.len() != rule.inputs.len() {
        return Err(violation(vec![Problem::Arity]));
    }
    let mut labels: Vec<Label> = operands.iter().flat_map(|s| s.labels()).collect();
    labels.extend(log_target);
    let unframed = labels.iter().filter(|l| **l == Label::Unframed).count();
    if unframed != 0 && unframed != labels.len() {
        return Err(violation(vec![Problem::Mixed]));
    }
    let preset = log_target.map(|t| ('X', t));
    match unify(rule.inputs, operands, preset) {
        Ok(b) => Ok(instantiate(rule.output, &b)),
        Err(problems) => {
            if op == Operation::Sum {
                let swapped = [operands[1], operands[0]];
                if let Ok(b) = unify(rule.inputs, &swapped, None) {
                    return Ok(instantiate(rule.output, &b));
                }
            }
            Err(violation(problems))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Label = Label::Named("A");
    const B: Label = Label::Named("B");
    const C: Label = Label::Named("C");
    const D: Label = Label::Named("D");
    const L: Label = Label::Named("L");
    const U: Label = Label::Unframed;

    fn p(d: Label, a: Label, b: Label) -> FrameSignature {
        FrameSignature::Triple(d, a, b)
    }
    fn g(a: Label, b: Label) -> FrameSignature {
        FrameSignature::Pair(a, b)
    }

    #[test]
    fn rotation_then_sum_derivation() {
        let rotated = check_rule(Operation::Rotation, &[g(B, C), p(C, C, L)]).unwrap();
        assert_eq!(rotated, p(B, C, L));
        let sum = check_rule(Operation::Sum, &[rotated, p(B, B, C)]).unwrap();
        assert_eq!(sum, p(B, B, L));
    }

    #[test]
    fn reversed_rotation_is_reported() {
        let v = check_rule(Operation::Rotation, &[g(C, B), p(C, C, L)]).unwrap_err();
        assert_eq!(
            v.to_string(),
            "rule=Rotation expected=Φ_DA(p^A_BC) got=(C,B), (C,C,L)"
        );
        let (first, second) = v.positions()[0];
        assert_eq!(first, Position { operand: 0, slot: 1 });
        assert_eq!(second, Position { operand: 1, slot: 0 });
    }

    #[test]
    fn all_unframed_passes_every_rule() {
        for op in Operation::ALL {
            let operands: Vec<_> = op
                .rule()
                .inputs
                .iter()
                .map(|pat| if pat.len() == 2 { g(U, U) } else { p(U, U, U) })
                .collect();
            let out = check_rule(op, &operands).unwrap();
            assert!(out.labels().iter().all(|l| *l == U), "{op:?}");
        }
    }

    #[test]
    fn mixing_is_rejected() {
        let v = check_rule(Operation::Composition, &[g(A, B), g(B, U)]).unwrap_err();
        assert_eq!(v.problems, vec![Problem::Mixed]);
        assert!(check_rule(Operation::Log(A), &[g(U, U)]).is_err());
    }

    #[test]
    fn sum_commutes_and_log_uses_target() {
        assert_eq!(
            check_rule(Operation::Sum, &[p(D, B, C), p(D, A, B)]).unwrap(),
            p(D, A, C)
        );
        assert_eq!(check_rule(Operation::Log(C), &[g(A, A)]).unwrap(), p(A, A, C));
        let v = check_rule(Operation::Log(C), &[g(A, B)]).unwrap_err();
        assert_eq!(v.to_string(), "rule=Log map expected=log_X(Φ_AA) got=(A,B), C");
    }

    #[test]
    fn arity_is_checked() {
        let v = check_rule(Operation::Inverse, &[p(A, A, B)]).unwrap_err();
        assert_eq!(v.problems, vec![Problem::Arity]);
        assert!(check_rule(Operation::Sum, &[p(A, A, B)]).is_err());
    }
}
