use std::collections::HashSet;

use super::ast::*;

/// Rewrites `k-right`, `k-left` and `move-to-leftend` into core commands and
/// makes fall-through between blocks explicit.
///
/// `move-to-leftend` becomes a jump to a fresh block
/// `L: left; if leftend then right else goto L end; <rest>`. When the macro
/// sits inside an `if` or `choice`, the commands following that construct are
/// moved to a continuation block so the loop has a label to return to. The
/// last block falls through to `reject`.
pub fn expand_macros(program: &Program) -> Program {
    let mut fresh = FreshLabels {
        taken: program.blocks.iter().map(|b| b.label.clone()).collect(),
        next: 0,
    };
    let mut extra = Vec::new();
    let mut blocks = Vec::with_capacity(program.blocks.len());
    for (i, block) in program.blocks.iter().enumerate() {
        let tail = match program.blocks.get(i + 1) {
            Some(next) => Command::Goto(next.label.clone()),
            None => Command::Reject,
        };
        let mut lowering = Lowering {
            fresh: &mut fresh,
            blocks: &mut extra,
        };
        let body = lowering.seq(&block.body, Some(&[tail]));
        blocks.push(Block::new(block.label.clone(), body));
        // generated blocks follow the block they were split from
        blocks.append(&mut extra);
    }
    Program::new(program.heads, blocks)
}

struct FreshLabels {
    taken: HashSet<String>,
    next: usize,
}

impl FreshLabels {
    fn next(&mut self) -> String {
        loop {
            let label = format!("L{}", self.next);
            self.next += 1;
            if self.taken.insert(label.clone()) {
                return label;
            }
        }
    }
}

struct Lowering<'a> {
    fresh: &'a mut FreshLabels,
    blocks: &'a mut Vec<Block>,
}

fn contains_leftend_move(cmd: &Command) -> bool {
    let mut found = false;
    cmd.visit(&mut |c| found |= matches!(c, Command::MoveToLeftEnd(_)));
    found
}

impl Lowering<'_> {
    /// Lowers `seq`. With `tail = Some(t)`, `t` runs after `seq` unless control
    /// already leaves it; with `None` the sequence simply ends.
    fn seq(&mut self, seq: &[Command], tail: Option<&[Command]>) -> CommandSeq {
        let mut out = Vec::with_capacity(seq.len());
        for (i, cmd) in seq.iter().enumerate() {
            let rest = &seq[i + 1..];
            match cmd {
                Command::RightBy { head, count } => {
                    out.extend(std::iter::repeat_n(Command::Right(*head), *count))
                }
                Command::LeftBy { head, count } => {
                    out.extend(std::iter::repeat_n(Command::Left(*head), *count))
                }
                Command::MoveToLeftEnd(head) => {
                    let label = self.fresh.next();
                    let mut body = vec![
                        Command::Left(*head),
                        Command::If(
                            BoolExpr::LeftEnd(*head),
                            vec![Command::Right(*head)],
                            vec![Command::Goto(label.clone())],
                        ),
                    ];
                    body.extend_from_slice(rest);
                    let body = self.seq(&body, tail);
                    out.push(Command::Goto(label.clone()));
                    self.blocks.push(Block::new(label, body));
                    return out;
                }
                Command::If(..) | Command::Choice(..) if contains_leftend_move(cmd) => {
                    let cont = self.continuation(rest, tail);
                    let cont = cont.as_deref();
                    out.push(match cmd {
                        Command::If(b, t, e) => {
                            Command::If(b.clone(), self.seq(t, cont), self.seq(e, cont))
                        }
                        Command::Choice(a, b) => {
                            Command::Choice(self.seq(a, cont), self.seq(b, cont))
                        }
                        _ => unreachable!(),
                    });
                    return out;
                }
                Command::If(b, t, e) => {
                    out.push(Command::If(b.clone(), self.seq(t, None), self.seq(e, None)))
                }
                Command::Choice(a, b) => {
                    out.push(Command::Choice(self.seq(a, None), self.seq(b, None)))
                }
                other => out.push(other.clone()),
            }
        }
        if let Some(tail) = tail {
            if !ends_in_transfer(&out) {
                out.extend_from_slice(tail);
            }
        }
        out
    }

    /// What runs after a compound command whose branches are being split:
    /// the remaining commands, moved into a block of their own unless they
    /// are empty or a lone transfer.
    fn continuation(&mut self, rest: &[Command], tail: Option<&[Command]>) -> Option<Vec<Command>> {
        match rest {
            [] => tail.map(|t| t.to_vec()),
            [single] if single.is_transfer() => Some(rest.to_vec()),
            _ => {
                let label = self.fresh.next();
                let body = self.seq(rest, tail);
                self.blocks.push(Block::new(label.clone(), body));
                Some(vec![Command::Goto(label)])
            }
        }
    }
}
