use std::fmt::{self, Write};

use super::ast::*;

fn head_name(base: &str, head: Head) -> String {
    if head == 1 {
        base.to_owned()
    } else {
        format!("{base}{head}")
    }
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymExpr::Const(s) => write!(f, "'{s}'"),
            SymExpr::Top => f.write_str("top"),
            SymExpr::Hd(h) => f.write_str(&head_name("hd", *h)),
        }
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoolExpr::Bottom => f.write_str("bottom"),
            BoolExpr::LeftEnd(h) => f.write_str(&head_name("leftend", *h)),
            BoolExpr::RightEnd(h) => f.write_str(&head_name("rightend", *h)),
            BoolExpr::Eq(l, r) => write!(f, "{l} = {r}"),
            BoolExpr::And(l, r) => {
                match **l {
                    BoolExpr::Or(..) => write!(f, "({l}) && ")?,
                    _ => write!(f, "{l} && ")?,
                }
                match **r {
                    BoolExpr::And(..) | BoolExpr::Or(..) => write!(f, "({r})"),
                    _ => write!(f, "{r}"),
                }
            }
            BoolExpr::Or(l, r) => {
                match **l {
                    BoolExpr::And(..) => write!(f, "({l})")?,
                    _ => write!(f, "{l}")?,
                }
                f.write_str(" || ")?;
                match **r {
                    BoolExpr::And(..) | BoolExpr::Or(..) => write!(f, "({r})"),
                    _ => write!(f, "{r}"),
                }
            }
        }
    }
}

fn write_seq(out: &mut String, seq: &[Command], depth: usize) -> fmt::Result {
    for (i, cmd) in seq.iter().enumerate() {
        write_cmd(out, cmd, depth)?;
        if i + 1 < seq.len() {
            out.push(';');
        }
        out.push('\n');
    }
    Ok(())
}

fn indent(out: &mut String, depth: usize) {
    out.extend(std::iter::repeat_n("  ", depth));
}

fn write_cmd(out: &mut String, cmd: &Command, depth: usize) -> fmt::Result {
    indent(out, depth);
    match cmd {
        Command::Pop => out.push_str("pop"),
        Command::Push(e) => write!(out, "push {e}")?,
        Command::Left(h) => out.push_str(&head_name("left", *h)),
        Command::Right(h) => out.push_str(&head_name("right", *h)),
        Command::Goto(l) => write!(out, "goto {l}")?,
        Command::Skip => out.push_str("skip"),
        Command::Accept => out.push_str("accept"),
        Command::Reject => out.push_str("reject"),
        Command::RightBy { head, count } => write!(out, "{count}-{}", head_name("right", *head))?,
        Command::LeftBy { head, count } => write!(out, "{count}-{}", head_name("left", *head))?,
        Command::MoveToLeftEnd(h) => out.push_str(&head_name("move-to-leftend", *h)),
        Command::Choice(a, b) => {
            out.push_str("choice\n");
            write_seq(out, a, depth + 1)?;
            indent(out, depth);
            out.push_str("or\n");
            write_seq(out, b, depth + 1)?;
            indent(out, depth);
            out.push_str("end");
        }
        Command::If(cond, then, otherwise) => {
            writeln!(out, "if {cond} then")?;
            write_seq(out, then, depth + 1)?;
            if otherwise.as_slice() != [Command::Skip] {
                indent(out, depth);
                out.push_str("else\n");
                write_seq(out, otherwise, depth + 1)?;
            }
            indent(out, depth);
            out.push_str("end");
        }
    }
    Ok(())
}

/// Renders a program in the concrete syntax accepted by
/// [`parse_program`](super::parse_program).
pub fn pretty_print(program: &Program) -> String {
    let mut out = String::new();
    if program.heads != 1 {
        out.push_str(&format!("heads: {}\n", program.heads));
    }
    for block in &program.blocks {
        out.push_str(&block.label);
        out.push_str(":\n");
        write_seq(&mut out, &block.body, 1).expect("writing to a String cannot fail");
    }
    out
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty_print(self))
    }
}
