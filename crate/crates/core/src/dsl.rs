//! Line-oriented game description format.
//!
//! ```text
//! game signaling
//! players 2
//! types 1: t1 t2
//! prior: (t1) = 1/4
//! prior: (t2) = 3/4
//! stage 1:
//!   actions 1 at *: A B
//! stage 2:
//!   actions 2 at *: L R
//! payoffs: (t1, A L) = (2, 2)
//! ...
//! ```
//!
//! Players without a `types` line have the single type `-`. A player with
//! no `actions` line at a history gets the singleton action `pass`. Paths
//! are sequences of steps, each either a full action tuple `(a1,…,an)` or
//! the bare label of the only player with more than one action.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use crate::error::{GameError, ParseError, Pos};
use crate::game::{path_text, Game, GameBuilder, HistoryView, PASS};
use crate::scalar::{format_rational, parse_rational, Rational};
use crate::scramble::scramble;

/// The illustrative two-type signaling game.
pub const SIGNALING_FIXTURE: &str = include_str!("../fixtures/signaling.game");

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    LParen,
    RParen,
    Comma,
    Eq,
    Colon,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: Pos,
}

fn lex_line(line: &str, line_no: usize) -> Vec<Token> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line: line_no, column: i + 1 };
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            ':' if chars.get(i + 1).is_none_or(|n| n.is_whitespace()) => Some(Tok::Colon),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, pos });
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() || matches!(c, '(' | ')' | ',' | '=' | '#') {
                break;
            }
            if c == ':' && chars.get(i + 1).is_none_or(|n| n.is_whitespace()) {
                break;
            }
            i += 1;
        }
        out.push(Token { tok: Tok::Word(chars[start..i].iter().collect()), pos });
    }
    out
}

struct Cursor {
    toks: Vec<Token>,
    i: usize,
    eol: Pos,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.eol, |t| t.pos)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), message: message.into() })
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|t| t.tok.clone());
        self.i += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn word(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.i += 1;
                Ok(w)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn end(&self) -> Result<(), ParseError> {
        if self.i < self.toks.len() {
            self.err("unexpected trailing input")
        } else {
            Ok(())
        }
    }

    /// `( w, w, … )`, possibly empty.
    fn tuple(&mut self, what: &str) -> Result<Vec<(String, Pos)>, ParseError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut items = Vec::new();
        if self.peek() == Some(&Tok::RParen) {
            self.i += 1;
            return Ok(items);
        }
        loop {
            let pos = self.pos();
            items.push((self.word(what)?, pos));
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => return Ok(items),
                _ => {
                    self.i -= 1;
                    return self.err("expected `,` or `)`");
                }
            }
        }
    }

    /// Path steps until the end of input or a token in `stop`.
    fn path(&mut self, stop: &[Tok]) -> Result<Vec<Vec<String>>, ParseError> {
        let mut steps = Vec::new();
        while let Some(t) = self.peek() {
            if stop.contains(t) {
                break;
            }
            match t {
                Tok::LParen => steps.push(self.tuple("action label")?.into_iter().map(|x| x.0).collect()),
                Tok::Word(w) => {
                    steps.push(vec![w.clone()]);
                    self.i += 1;
                }
                _ => return self.err("expected a path step"),
            }
        }
        Ok(steps)
    }
}

struct ActionRule {
    player: usize,
    pattern: Option<Vec<Vec<String>>>,
    labels: Vec<String>,
    pos: Pos,
}

struct PayoffLine {
    profile: usize,
    path: Vec<Vec<String>>,
    values: Vec<Rational>,
    pos: Pos,
}

/// Type labels with their positions.
type TypeTags = Vec<(String, Pos)>;
/// Stage action profiles as labels.
type LabelPath = Vec<Vec<String>>;

#[derive(Default)]
struct Source {
    name: Option<String>,
    players: Option<usize>,
    types: BTreeMap<usize, Vec<String>>,
    prior: Vec<(TypeTags, Rational, Pos)>,
    stages: Vec<Vec<ActionRule>>,
    payoffs: Vec<(TypeTags, LabelPath, Vec<Rational>, Pos)>,
    scrambled: bool,
}

fn number(c: &mut Cursor) -> Result<Rational, ParseError> {
    let pos = c.pos();
    let w = c.word("a number")?;
    parse_rational(&w).map_err(|e| ParseError::Syntax { pos, message: e.to_string() })
}

fn player_index(c: &mut Cursor, src: &Source) -> Result<usize, ParseError> {
    let pos = c.pos();
    let n = src.players.ok_or(ParseError::Syntax {
        pos,
        message: "`players` must be declared first".into(),
    })?;
    let w = c.word("a player number")?;
    match w.parse::<usize>() {
        Ok(i) if i >= 1 && i <= n => Ok(i - 1),
        _ => Err(ParseError::Syntax { pos, message: format!("player must be in 1..={n}, got `{w}`") }),
    }
}

fn parse_line(c: &mut Cursor, src: &mut Source) -> Result<(), ParseError> {
    let start = c.pos();
    let kw = c.word("a keyword")?;
    match kw.as_str() {
        "game" => {
            if src.name.is_some() {
                return Err(ParseError::DuplicateDeclaration { pos: start, what: "game".into() });
            }
            let mut parts = Vec::new();
            while c.peek().is_some() {
                parts.push(c.word("a game name")?);
            }
            if parts.is_empty() {
                return c.err("expected a game name");
            }
            src.name = Some(parts.join(" "));
        }
        "players" => {
            if src.players.is_some() {
                return Err(ParseError::DuplicateDeclaration { pos: start, what: "players".into() });
            }
            let pos = c.pos();
            let w = c.word("a player count")?;
            let n: usize = w
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or(ParseError::Syntax { pos, message: format!("bad player count `{w}`") })?;
            src.players = Some(n);
        }
        "types" => {
            let i = player_index(c, src)?;
            c.expect(Tok::Colon, "`:`")?;
            if src.types.contains_key(&i) {
                return Err(ParseError::DuplicateDeclaration { pos: start, what: format!("types {}", i + 1) });
            }
            let mut labels: Vec<String> = Vec::new();
            while c.peek().is_some() {
                let pos = c.pos();
                let l = c.word("a type label")?;
                if labels.contains(&l) {
                    return Err(ParseError::DuplicateDeclaration { pos, what: l });
                }
                labels.push(l);
            }
            if labels.is_empty() {
                return c.err("expected at least one type label");
            }
            src.types.insert(i, labels);
        }
        "prior" => {
            c.expect(Tok::Colon, "`:`")?;
            let tuple = c.tuple("a type label")?;
            c.expect(Tok::Eq, "`=`")?;
            let p = number(c)?;
            src.prior.push((tuple, p, start));
        }
        "stage" => {
            let pos = c.pos();
            let w = c.word("a stage number")?;
            c.expect(Tok::Colon, "`:`")?;
            let want = src.stages.len() + 1;
            if w.parse::<usize>().ok() != Some(want) {
                return Err(ParseError::Syntax { pos, message: format!("expected `stage {want}:`") });
            }
            src.stages.push(Vec::new());
        }
        "actions" => {
            if src.stages.is_empty() {
                return Err(ParseError::Syntax { pos: start, message: "`actions` outside a stage block".into() });
            }
            let player = player_index(c, src)?;
            if c.word("`at`")? != "at" {
                c.i -= 1;
                return c.err("expected `at`");
            }
            let pattern = if c.peek() == Some(&Tok::Word("*".into())) {
                c.i += 1;
                None
            } else {
                Some(c.path(&[Tok::Colon])?)
            };
            c.expect(Tok::Colon, "`:`")?;
            let mut labels: Vec<String> = Vec::new();
            while c.peek().is_some() {
                let pos = c.pos();
                let l = c.word("an action label")?;
                if labels.contains(&l) {
                    return Err(ParseError::DuplicateDeclaration { pos, what: l });
                }
                labels.push(l);
            }
            if labels.is_empty() {
                return c.err("expected at least one action label");
            }
            let stage = src.stages.last_mut().expect("checked above");
            if stage.iter().any(|r| r.player == player && r.pattern == pattern) {
                return Err(ParseError::DuplicateDeclaration {
                    pos: start,
                    what: format!("actions {} at the same histories", player + 1),
                });
            }
            stage.push(ActionRule { player, pattern, labels, pos: start });
        }
        "payoffs" => {
            c.expect(Tok::Colon, "`:`")?;
            c.expect(Tok::LParen, "`(`")?;
            let types = match c.peek() {
                Some(Tok::LParen) => c.tuple("a type label")?,
                Some(Tok::Word(_)) => {
                    let pos = c.pos();
                    vec![(c.word("a type label")?, pos)]
                }
                _ => return c.err("expected a type tuple"),
            };
            c.expect(Tok::Comma, "`,`")?;
            let path = c.path(&[Tok::RParen])?;
            c.expect(Tok::RParen, "`)`")?;
            c.expect(Tok::Eq, "`=`")?;
            c.expect(Tok::LParen, "`(`")?;
            let mut values = Vec::new();
            loop {
                values.push(number(c)?);
                match c.next() {
                    Some(Tok::Comma) => continue,
                    Some(Tok::RParen) => break,
                    _ => {
                        c.i -= 1;
                        return c.err("expected `,` or `)`");
                    }
                }
            }
            src.payoffs.push((types, path, values, start));
        }
        "scrambled" => {
            c.expect(Tok::Colon, "`:`")?;
            let pos = c.pos();
            match c.word("`auto`")?.as_str() {
                "auto" => src.scrambled = true,
                other => {
                    return Err(ParseError::Syntax { pos, message: format!("expected `auto`, got `{other}`") })
                }
            }
        }
        other => {
            return Err(ParseError::Syntax { pos: start, message: format!("unknown keyword `{other}`") });
        }
    }
    c.end()
}

/// Whether path `steps` names the label path `path` given the action sets
/// seen along it.
fn path_matches(
    steps: &[Vec<String>],
    path: &[Vec<String>],
    sets: &HashMap<Vec<Vec<String>>, Vec<Vec<String>>>,
) -> bool {
    steps.len() == path.len()
        && steps.iter().enumerate().all(|(d, step)| {
            let actual = &path[d];
            if step == actual {
                return true;
            }
            if step.len() != 1 {
                return false;
            }
            let Some(at) = sets.get(&path[..d]) else { return false };
            (0..actual.len()).any(|i| {
                actual[i] == step[0] && (0..actual.len()).all(|j| j == i || at[j].len() == 1)
            })
        })
}

fn type_profile(
    labels: &[Vec<String>],
    typed: &[usize],
    tuple: &[(String, Pos)],
    pos: Pos,
) -> Result<usize, ParseError> {
    if tuple.len() != typed.len() {
        return Err(ParseError::Syntax {
            pos,
            message: format!("type tuple needs {} labels, got {}", typed.len(), tuple.len()),
        });
    }
    let mut types = vec![0; labels.len()];
    for (&i, (l, p)) in typed.iter().zip(tuple) {
        types[i] = labels[i]
            .iter()
            .position(|x| x == l)
            .ok_or_else(|| ParseError::UndeclaredLabel { pos: *p, label: l.clone() })?;
    }
    Ok(types.iter().zip(labels).fold(0, |acc, (t, l)| acc * l.len() + t))
}

/// Parses a game description.
pub fn parse_game(text: &str) -> Result<Game, ParseError> {
    let mut src = Source::default();
    let mut last = Pos { line: 1, column: 1 };
    for (n, line) in text.lines().enumerate() {
        let toks = lex_line(line, n + 1);
        let eol = Pos { line: n + 1, column: line.chars().count() + 1 };
        if toks.is_empty() {
            continue;
        }
        last = eol;
        let mut c = Cursor { toks, i: 0, eol };
        parse_line(&mut c, &mut src)?;
    }
    let name = src.name.clone().ok_or(ParseError::Syntax { pos: last, message: "missing `game` line".into() })?;
    let n = src.players.ok_or(ParseError::Syntax { pos: last, message: "missing `players` line".into() })?;
    let labels: Vec<Vec<String>> =
        (0..n).map(|i| src.types.get(&i).cloned().unwrap_or_else(|| vec!["-".into()])).collect();
    let typed: Vec<usize> = src.types.keys().copied().collect();
    let count: usize = labels.iter().map(Vec::len).product();

    let mut prior: Vec<Option<Rational>> = vec![None; count];
    for (tuple, p, pos) in &src.prior {
        let k = type_profile(&labels, &typed, tuple, *pos)?;
        if prior[k].is_some() {
            return Err(ParseError::DuplicateDeclaration { pos: *pos, what: "prior entry".into() });
        }
        prior[k] = Some(p.clone());
    }
    if src.prior.is_empty() && count == 1 {
        prior[0] = Some(Rational::from_integer(1.into()));
    }
    let prior: Vec<Rational> = prior
        .into_iter()
        .map(|p| p.unwrap_or_else(|| Rational::from_integer(0.into())))
        .collect();

    let mut payoffs: Vec<PayoffLine> = Vec::new();
    for (tuple, path, values, pos) in &src.payoffs {
        if values.len() != n {
            return Err(ParseError::Syntax {
                pos: *pos,
                message: format!("payoff vector needs {n} entries, got {}", values.len()),
            });
        }
        let profile = type_profile(&labels, &typed, tuple, *pos)?;
        payoffs.push(PayoffLine { profile, path: path.clone(), values: values.clone(), pos: *pos });
    }

    if src.stages.is_empty() {
        return Err(ParseError::Syntax { pos: last, message: "at least one `stage` block is required".into() });
    }
    let horizon = src.stages.len();
    let seen: RefCell<HashMap<LabelPath, LabelPath>> = RefCell::new(HashMap::new());
    let mut used = vec![Vec::new(); horizon];
    for (t, rules) in src.stages.iter().enumerate() {
        used[t] = vec![false; rules.len()];
    }
    let rules = &src.stages;
    let mut pending: Vec<Vec<String>> = Vec::new();
    let mut terminal_table: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut duplicate: Option<Pos> = None;
    let mut n_terminals = 0usize;

    let game = GameBuilder::new(name, labels.clone(), prior, horizon).build(
        |i, view: &HistoryView| {
            let stage_rules = &rules[view.stage];
            let mut chosen: Option<usize> = None;
            for (r, rule) in stage_rules.iter().enumerate() {
                if rule.player != i {
                    continue;
                }
                match &rule.pattern {
                    Some(steps) if path_matches(steps, view.path, &seen.borrow()) => chosen = Some(r),
                    None if chosen.is_none() => chosen = Some(r),
                    _ => {}
                }
            }
            let set = match chosen {
                Some(r) => {
                    used[view.stage][r] = true;
                    stage_rules[r].labels.clone()
                }
                None => vec![PASS.to_string()],
            };
            pending.push(set.clone());
            if pending.len() == n {
                seen.borrow_mut().insert(view.path.to_vec(), std::mem::take(&mut pending));
            }
            Ok(set)
        },
        |types, view: &HistoryView| {
            let k = types.iter().zip(&labels).fold(0, |acc, (t, l)| acc * l.len() + t);
            if k == 0 {
                n_terminals += 1;
            }
            for (idx, line) in payoffs.iter().enumerate() {
                if line.profile == k && path_matches(&line.path, view.path, &seen.borrow())
                    && terminal_table.insert((k, view.index_in_stage), idx).is_some() {
                        duplicate = Some(line.pos);
                    }
            }
            match terminal_table.get(&(k, view.index_in_stage)) {
                Some(&idx) => Ok(payoffs[idx].values.clone()),
                None => Err(GameError::MissingPayoff {
                    types: types
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| typed.contains(i))
                        .map(|(i, &t)| labels[i][t].clone())
                        .collect::<Vec<_>>()
                        .join(","),
                    history: path_text(view.path),
                }),
            }
        },
    )?;
    if let Some(pos) = duplicate {
        return Err(ParseError::DuplicateDeclaration { pos, what: "payoff entry".into() });
    }
    for (t, stage_rules) in src.stages.iter().enumerate() {
        for (r, rule) in stage_rules.iter().enumerate() {
            if !used[t][r] {
                if let Some(steps) = &rule.pattern {
                    return Err(GameError::DanglingHistory(format!(
                        "{} (line {})",
                        path_text(steps),
                        rule.pos.line
                    ))
                    .into());
                }
            }
        }
    }
    let matched: std::collections::BTreeSet<usize> = terminal_table.values().copied().collect();
    if let Some((_, line)) = payoffs.iter().enumerate().find(|(i, _)| !matched.contains(i)) {
        return Err(GameError::DanglingHistory(format!("{} (line {})", path_text(&line.path), line.pos.line)).into());
    }
    debug_assert_eq!(n_terminals, game.terminals().len());
    Ok(if src.scrambled { scramble(&game) } else { game })
}

/// Canonical text form. Every action set other than `pass` is written at
/// `*` when uniform across the stage, else at explicit full-tuple paths.
pub fn write_game(game: &Game) -> String {
    let mut out = String::new();
    let n = game.players();
    let ts = game.types();
    let typed = ts.typed_players();
    out.push_str(&format!("game {}\nplayers {n}\n", game.name()));
    for &i in &typed {
        out.push_str(&format!("types {}: {}\n", i + 1, ts.labels(i).join(" ")));
    }
    let tuple = |k: usize| {
        let types = ts.decode(k);
        let labels: Vec<&str> = typed.iter().map(|&i| ts.label(i, types[i])).collect();
        format!("({})", labels.join(","))
    };
    for k in 0..ts.count() {
        if typed.is_empty() {
            break;
        }
        out.push_str(&format!("prior: {} = {}\n", tuple(k), format_rational(&game.prior_exact()[k])));
    }
    for t in 0..game.horizon() {
        out.push_str(&format!("stage {}:\n", t + 1));
        for i in 0..n {
            let hs: Vec<_> = game.stage(t).collect();
            let first = &game.history(hs[0]).actions[i];
            if hs.iter().all(|&h| &game.history(h).actions[i] == first) {
                if first.as_slice() != [PASS] {
                    out.push_str(&format!("  actions {} at *: {}\n", i + 1, first.join(" ")));
                }
                continue;
            }
            for &h in &hs {
                let set = &game.history(h).actions[i];
                if set.as_slice() != [PASS] {
                    out.push_str(&format!(
                        "  actions {} at {}: {}\n",
                        i + 1,
                        path_text(&game.label_path(h)),
                        set.join(" ")
                    ));
                }
            }
        }
    }
    for &h in game.terminals() {
        let path = path_text(&game.label_path(h));
        for k in 0..ts.count() {
            let u: Vec<String> = (0..n).map(|i| format_rational(game.payoff_exact(h, k, i))).collect();
            out.push_str(&format!("payoffs: ({}, {}) = ({})\n", tuple(k), path, u.join(", ")));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn fixture_is_the_signaling_game() {
        let g = parse_game(SIGNALING_FIXTURE).unwrap();
        assert_eq!(g.players(), 2);
        assert_eq!(g.horizon(), 2);
        assert_eq!(g.stage(1).len(), 2);
        assert_eq!(g.terminals().len(), 4);
        assert_eq!(g.prior_exact(), &[ratio(1, 4), ratio(3, 4)]);
        let bl = g.parse_history("B L").unwrap();
        assert_eq!(g.payoff::<Rational>(bl, 0, 0), ratio(4, 1));
        assert_eq!(g.payoff::<Rational>(bl, 0, 1), ratio(-1, 1));
    }

    #[test]
    fn empty_input_is_a_syntax_error() {
        assert!(matches!(parse_game(""), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_game("# nothing\n\n"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn prior_must_sum_to_one() {
        let text = SIGNALING_FIXTURE.replace("prior: (t2) = 3/4", "prior: (t2) = 0.65");
        assert_eq!(
            parse_game(&text).unwrap_err(),
            ParseError::Game(GameError::PriorNotNormalized("9/10".into()))
        );
    }

    #[test]
    fn errors_carry_positions() {
        let text = "game g\nplayers 1\nstage 1:\n  actions 1 at *: a a\n";
        match parse_game(text).unwrap_err() {
            ParseError::DuplicateDeclaration { pos, .. } => assert_eq!((pos.line, pos.column), (4, 21)),
            e => panic!("{e:?}"),
        }
        let text = "game g\nplayers 1\ntypes 1: x y\nprior: (z) = 1\n";
        match parse_game(text).unwrap_err() {
            ParseError::UndeclaredLabel { pos, label } => {
                assert_eq!(label, "z");
                assert_eq!(pos.line, 4);
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn missing_and_dangling_payoffs() {
        let text = "game g\nplayers 1\nstage 1:\n  actions 1 at *: a b\npayoffs: ((), a) = (1)\n";
        assert!(matches!(parse_game(text), Err(ParseError::Game(GameError::MissingPayoff { .. }))));
        let text = format!("{text}payoffs: ((), b) = (0)\npayoffs: ((), c) = (0)\n");
        assert!(matches!(parse_game(&text), Err(ParseError::Game(GameError::DanglingHistory(_)))));
    }

    #[test]
    fn explicit_pattern_beats_wildcard() {
        let text = "game g\nplayers 1\nstage 1:\n  actions 1 at *: a b\nstage 2:\n  actions 1 at *: x y\n  actions 1 at a: z\n\
                    payoffs: ((), a z) = (1)\npayoffs: ((), b x) = (2)\npayoffs: ((), b y) = (3)\n";
        let g = parse_game(text).unwrap();
        assert_eq!(g.terminals().len(), 3);
        assert_eq!(g.history(g.parse_history("a").unwrap()).actions[0], vec!["z".to_string()]);
    }

    #[test]
    fn canonical_text_round_trips() {
        let g = parse_game(SIGNALING_FIXTURE).unwrap();
        let text = write_game(&g);
        assert_eq!(parse_game(&text).unwrap(), g);
        let s = scramble(&g);
        assert_eq!(parse_game(&write_game(&s)).unwrap(), s);
    }
}
