//! Command-line front end. Every subcommand is a thin adapter over a library call.

use crate::abelian::{self, AbelianNF, Verdict};
use crate::ball::{self, BallCertificate, BallOptions, Girth, DEFAULT_MAX_STATES};
use crate::error::{Error, Result};
use crate::group::hall::PrimeColouring;
use crate::group::{split_top_level, GroupModel, MarkedGroup};
use crate::identity::{self, nilpotent, sentence, smallcancel, Search};
use crate::word::Word;
use crate::{growth, parse_group, parse_word, poset, witness};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "mgroups", version, about = "Marked Cayley balls, convergence witnesses and the preorder on groups")]
pub struct Cli {
    /// worker threads (default: available cores); results do not depend on it
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STATES)]
    pub max_states: usize,
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub omit_timings: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Abelian,
    Hall,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ColouringKind {
    Universal,
    Spread,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscriminateMode {
    Tuple,
    Identity,
    Almost,
    Verbal,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Canonical ball certificate of a marked group
    Ball {
        group: String,
        #[arg(long)]
        gens: Option<String>,
        #[arg(short = 'R', long)]
        radius: u32,
    },
    /// Compare two marked balls
    Compare {
        group1: String,
        group2: String,
        #[arg(long)]
        gens1: Option<String>,
        #[arg(long)]
        gens2: Option<String>,
        #[arg(short = 'R', long)]
        radius: u32,
    },
    /// Girth up to 2·rmax+1
    Girth {
        group: String,
        #[arg(long)]
        gens: Option<String>,
        #[arg(long, default_value_t = 4)]
        rmax: u32,
    },
    /// Growth counts ν(r) for r ≤ R
    Growth {
        group: String,
        #[arg(long)]
        gens: Option<String>,
        #[arg(short = 'R', long)]
        radius: u32,
    },
    /// Relations of length ≤ L
    Relations {
        group: String,
        #[arg(long)]
        gens: Option<String>,
        #[arg(short = 'L', long)]
        length: usize,
    },
    /// Build and verify a convergence witness; extra `--key value` pairs become parameters
    Witness {
        case: String,
        #[arg(short = 'R', long)]
        radius: u32,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        verify_radius: Option<u32>,
    },
    /// Transport a witness along words over the target marking
    Transport {
        case: String,
        #[arg(short = 'R', long)]
        radius: u32,
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long)]
        words: String,
    },
    /// Decide A ⊰ B for infinite abelian groups, or sweep the catalog
    OrderAbelian {
        a: Option<String>,
        b: Option<String>,
        #[arg(long)]
        catalog: bool,
        /// transpositions like "2-3,5"
        #[arg(long)]
        sigma: Option<String>,
        /// build and verify an epimorphism witness at this R
        #[arg(long)]
        witness: Option<u32>,
    },
    /// Order matrix of a poset family indexed by subsets of a prime list
    Poset {
        #[arg(long)]
        primes: String,
        /// 1-based index sets separated by ';'
        #[arg(long)]
        subsets: String,
        #[arg(long, value_enum, default_value_t = Family::Abelian)]
        family: Family,
    },
    /// Emit a prime colouring file
    Colouring {
        #[arg(long)]
        primes: String,
        #[arg(long, value_enum, default_value_t = ColouringKind::Universal)]
        kind: ColouringKind,
    },
    /// Hall-group quotient witness between two colourings (default example if none given)
    Hall {
        #[arg(long)]
        phi: Option<PathBuf>,
        #[arg(long)]
        psi: Option<PathBuf>,
        #[arg(short = 'R', long)]
        radius: u32,
    },
    /// Discriminating tuples, identity falsification and verbal subgroups
    Discriminate {
        #[arg(value_enum)]
        mode: DiscriminateMode,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        words: Option<String>,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(short = 'R', long, default_value_t = 2)]
        radius: u32,
        #[arg(long, default_value_t = 2)]
        c0: u32,
    },
    /// Distinctive Grigorchuk tuple for a word, or a girth triple
    Distinctive {
        #[arg(long)]
        word: Option<String>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(short = 'R', long, default_value_t = 10)]
        radius: u32,
        #[arg(long)]
        girth: bool,
    },
    /// Check a universal sentence on a ball ("commtrans" and "n22" name the built-in ones)
    Sentence {
        sentence: String,
        #[arg(long)]
        group: String,
        #[arg(long)]
        gens: Option<String>,
        #[arg(long, default_value_t = 2)]
        rho: u32,
    },
    /// Merge words into one vanishing wherever any of them does
    Merge { words: Vec<String> },
    /// Small-cancellation check, or generation when no words are given
    Smallcancel {
        words: Vec<String>,
        #[arg(long, default_value = "1/6")]
        lambda: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 2)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        min_len: usize,
    },
    /// Root of 2^{3-3/α} + 2^{2-2/α} + 2^{1-1/α} = 2
    Alpha {
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Growth signature of wreath products over the Grigorchuk orbit
    Nueg {
        #[arg(long)]
        lamp: String,
        #[arg(long, default_value = "1,2")]
        radii: String,
    },
}

/// What a command produced.
pub struct Outcome {
    pub summary: String,
    pub result: Value,
    pub csv: Option<String>,
    /// file payload written by -o instead of the report (certificates, colourings)
    pub file: Option<String>,
    pub exit: i32,
}

impl Outcome {
    fn new(summary: String, result: Value) -> Outcome {
        Outcome { summary, result, csv: None, file: None, exit: 0 }
    }

    fn verdict(mut self, ok: bool) -> Outcome {
        self.exit = if ok { 0 } else { 1 };
        self
    }
}

fn names(k: usize) -> Vec<String> {
    if k <= 3 {
        ["x", "y", "z"][..k].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=k).map(|i| format!("x{i}")).collect()
    }
}

fn parse_any_word(text: &str) -> Result<Word> {
    parse_word(text, 3).or_else(|_| parse_word(text, 64))
}

fn word_list(text: &str) -> Result<Vec<Word>> {
    split_top_level(text).iter().map(|s| parse_any_word(s.trim())).collect()
}

fn marked(group: &str, gens: &Option<String>) -> Result<MarkedGroup> {
    let model = parse_group(group)?;
    match gens {
        Some(g) => MarkedGroup::parse(model, g),
        None => Ok(MarkedGroup::standard(model)),
    }
}

fn u64_list(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| Error::Param(format!("expected an integer, got {s}"))))
        .collect()
}

fn subsets(text: &str) -> Result<Vec<BTreeSet<usize>>> {
    text.split(';').map(|s| Ok(u64_list(s)?.into_iter().map(|i| i as usize).collect())).collect()
}

fn cert_value(c: &BallCertificate) -> Value {
    serde_json::from_str(&c.to_json()).expect("certificate JSON")
}

fn search_value(s: &Search, k: usize) -> Value {
    match s {
        Search::Found { tuple, radius } => {
            json!({"found": true, "radius": radius, "tuple": tuple.iter().map(|w| w.render(&names(k))).collect::<Vec<_>>()})
        }
        Search::NoneFound { radius, tuples } => json!({"found": false, "radius": radius, "tuples": tuples}),
    }
}

fn witness_outcome(w: &witness::Witness, r: u32, opts: &BallOptions) -> Result<Outcome> {
    let v = witness::verify(w, r, opts)?;
    let mut rep = witness::report(w, &v, None);
    rep["witness"] = w.describe();
    let summary = format!("case={} R={} agree={}", w.case, v.radius, v.agree);
    Ok(Outcome::new(summary, rep).verdict(v.agree))
}

fn read_colouring(p: &PathBuf) -> Result<PrimeColouring> {
    let text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Param(format!("{}: {e}", p.display())))?;
    PrimeColouring::from_json(&v)
}

/// Execute one command against the library.
pub fn execute(cmd: &Command, opts: &BallOptions, extra: &witness::Params) -> Result<Outcome> {
    match cmd {
        Command::Ball { group, gens, radius } => {
            let mg = marked(group, gens)?;
            let c = ball::ball(&mg, *radius, opts)?;
            let counts = c.counts();
            let summary = format!("radius={} states={} nu={}", radius, c.states.len(), counts.last().unwrap());
            let mut o = Outcome::new(summary, json!({"group": mg.model.descriptor(), "marking": mg.marking_text(), "certificate": cert_value(&c)}));
            o.file = Some(c.to_json());
            Ok(o)
        }
        Command::Compare { group1, group2, gens1, gens2, radius } => {
            let a = ball::ball(&marked(group1, gens1)?, *radius, opts)?;
            let b = ball::ball(&marked(group2, gens2)?, *radius, opts)?;
            if a.arity != b.arity {
                return Err(Error::Mismatch(format!("arities {} and {}", a.arity, b.arity)));
            }
            let fd = ball::first_divergence(&a, &b);
            let summary = format!("agree={}{}", fd.is_none(), fd.map(|r| format!(" first_divergence={r}")).unwrap_or_default());
            Ok(Outcome::new(summary, json!({"agree": fd.is_none(), "first_divergence": fd})).verdict(fd.is_none()))
        }
        Command::Girth { group, gens, rmax } => {
            let g = ball::girth(&marked(group, gens)?, *rmax, opts)?;
            let (summary, v) = match g {
                Girth::Value(x) => (format!("girth={x}"), json!({"girth": x})),
                Girth::Exceeds(x) => (format!("girth>{x}"), json!({"girth_exceeds": x})),
            };
            Ok(Outcome::new(summary, v))
        }
        Command::Growth { group, gens, radius } => {
            let t = ball::growth(&marked(group, gens)?, *radius, opts)?;
            let mut o = Outcome::new(
                format!("nu={:?} rate_upper={}", t.counts, t.rate_text()),
                json!({"counts": t.counts, "rate_upper": t.rate_upper}),
            );
            o.csv = Some(t.to_csv());
            Ok(o)
        }
        Command::Relations { group, gens, length } => {
            let mg = marked(group, gens)?;
            let rels = ball::relations_up_to(&mg, *length)?;
            let nm = names(mg.arity());
            let words: Vec<String> = rels.iter().map(|w| w.render(&nm)).collect();
            Ok(Outcome::new(words.join("\n"), json!({"relations": words})))
        }
        Command::Witness { case, radius, params, verify_radius } => {
            let mut p = witness::parse_params(params)?;
            p.extend(extra.clone());
            let w = witness::build(case, &p, *radius, opts)?;
            witness_outcome(&w, verify_radius.unwrap_or(w.check_radius), opts)
        }
        Command::Transport { case, radius, params, words } => {
            let mut p = witness::parse_params(params)?;
            p.extend(extra.clone());
            let w = witness::build(case, &p, *radius, opts)?;
            let k = w.target.arity();
            let t: Vec<Word> = split_top_level(words).iter().map(|s| parse_word(s.trim(), k)).collect::<Result<_>>()?;
            let moved = witness::transport(&w, &t)?;
            witness_outcome(&moved, moved.check_radius, opts)
        }
        Command::OrderAbelian { a, b, catalog, sigma, witness: wr } => {
            if *catalog {
                let groups = abelian::catalog();
                let csv = abelian::sweep_csv(&groups)?;
                let holds = csv.lines().skip(1).filter(|l| l.contains(",true,")).count();
                let pairs = groups.len() * groups.len();
                let mut o = Outcome::new(
                    format!("groups={} pairs={pairs} true={holds}", groups.len()),
                    json!({"groups": groups.len(), "pairs": pairs, "true": holds}),
                );
                o.csv = Some(csv);
                return Ok(o);
            }
            let (Some(a), Some(b)) = (a, b) else {
                return Err(Error::Param("order-abelian needs A and B, or --catalog".into()));
            };
            let (mut ga, mut gb) = (AbelianNF::parse(a)?, AbelianNF::parse(b)?);
            if let Some(s) = sigma {
                let map = abelian::parse_sigma(s)?;
                ga = abelian::sigma_action(&map, &ga)?;
                gb = abelian::sigma_action(&map, &gb)?;
            }
            let d = abelian::preceq_abelian(&ga, &gb)?;
            let ub = abelian::upper_bound(&ga, &gb)?;
            let mut result = json!({
                "A": ga.to_string(),
                "B": gb.to_string(),
                "verdict": d.verdict.as_str(),
                "method": d.method,
                "derivation": d.derivation,
                "upper_bound": ub.to_string(),
            });
            let mut summary = format!("{}\n{}", d.verdict.as_str(), d.derivation.join("\n"));
            if let (Some(r), Verdict::True) = (wr, d.verdict) {
                let w = abelian::epi_witness(&ga, &gb, *r)?;
                let o = witness_outcome(&w, *r, opts)?;
                summary.push('\n');
                summary.push_str(&o.summary);
                result["witness"] = o.result;
            }
            Ok(Outcome::new(summary, result).verdict(d.verdict == Verdict::True))
        }
        Command::Poset { primes, subsets: s, family } => {
            let primes = u64_list(primes)?;
            let sets = subsets(s)?;
            match family {
                Family::Abelian => {
                    let groups = abelian::poset_from_subsets(&primes, &sets)?;
                    let mut matrix = Vec::new();
                    let mut faithful = true;
                    for (i, gi) in groups.iter().enumerate() {
                        let mut row = Vec::new();
                        for (j, gj) in groups.iter().enumerate() {
                            let v = abelian::preceq_abelian(gi, gj)?.verdict == Verdict::True;
                            faithful &= v == sets[j].is_subset(&sets[i]);
                            row.push(v);
                        }
                        matrix.push(row);
                    }
                    let text: Vec<String> = matrix.iter().map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect()).collect();
                    Ok(Outcome::new(
                        format!("{}\nreverse_inclusion={faithful}", text.join("\n")),
                        json!({"groups": groups.iter().map(|g| g.to_string()).collect::<Vec<_>>(), "matrix": matrix, "reverse_inclusion": faithful}),
                    )
                    .verdict(faithful))
                }
                Family::Hall => {
                    let prime_sets: Vec<Vec<u64>> = sets
                        .iter()
                        .map(|u| {
                            u.iter()
                                .map(|&i| primes.get(i.wrapping_sub(1)).copied().ok_or_else(|| Error::Param(format!("index {i} out of range"))))
                                .collect()
                        })
                        .collect::<Result<_>>()?;
                    let m = poset::realize_finite_poset(&prime_sets, opts)?;
                    let cell = |v: &poset::PosetVerdict| match v {
                        poset::PosetVerdict::Witness { radius } => json!({"holds": true, "radius": radius}),
                        poset::PosetVerdict::Blocked { prime } => json!({"holds": false, "blocked_by": prime}),
                        poset::PosetVerdict::Failed { reason } => json!({"holds": null, "reason": reason}),
                    };
                    let ok = m.iter().flatten().all(|v| !matches!(v, poset::PosetVerdict::Failed { .. }));
                    let text: Vec<String> =
                        m.iter().map(|r| r.iter().map(|v| if v.holds() { '1' } else { '0' }).collect()).collect();
                    let matrix: Vec<Vec<Value>> = m.iter().map(|r| r.iter().map(cell).collect()).collect();
                    Ok(Outcome::new(text.join("\n"), json!({"matrix": matrix})).verdict(ok))
                }
            }
        }
        Command::Colouring { primes, kind } => {
            let primes = u64_list(primes)?;
            let c = match kind {
                ColouringKind::Universal => poset::universal_seed(&primes)?,
                ColouringKind::Spread => poset::spread_colouring(&primes),
            };
            let v = c.to_json();
            let mut o = Outcome::new(format!("assignments={}", c.assignments.len()), v.clone());
            o.file = Some(v.to_string());
            Ok(o)
        }
        Command::Hall { phi, psi, radius } => {
            let w = match (phi, psi) {
                (None, None) => poset::hall_colouring_witness(*radius, opts)?,
                (Some(a), Some(b)) => poset::hall_witness(&read_colouring(a)?, &read_colouring(b)?, *radius)?,
                _ => return Err(Error::Param("give both --phi and --psi, or neither".into())),
            };
            witness_outcome(&w, w.check_radius, opts)
        }
        Command::Discriminate { mode, group, words, k, n, radius, c0 } => {
            let model = || -> Result<GroupModel> {
                parse_group(group.as_deref().ok_or_else(|| Error::Param("--group is required".into()))?)
            };
            let ws = || -> Result<Vec<Word>> { word_list(words.as_deref().ok_or_else(|| Error::Param("--words is required".into()))?) };
            match mode {
                DiscriminateMode::Tuple => {
                    let t = nilpotent::discriminating_tuple(*k, *n, *radius, *c0, opts)?;
                    let marking: Vec<String> = MarkedGroup::unchecked(GroupModel::nil(*k, 0), t.marking.clone())?.marking_text();
                    Ok(Outcome::new(
                        format!("speed={} ball_radius={}", t.speed, t.ball_radius),
                        json!({
                            "exponents": t.exponents.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                            "speed": t.speed,
                            "marking": marking,
                            "ball_radius": t.ball_radius,
                        }),
                    ))
                }
                DiscriminateMode::Identity | DiscriminateMode::Almost => {
                    let m = model()?;
                    let w = ws()?.into_iter().next().ok_or_else(|| Error::Param("no word given".into()))?;
                    let s = if *mode == DiscriminateMode::Identity {
                        identity::falsify_identity(&m, &w, *radius, opts)?
                    } else {
                        identity::falsify_almost_identity(&m, &w, *k, *radius, opts)?
                    };
                    let found = matches!(s, Search::Found { .. });
                    let v = search_value(&s, m.num_gens());
                    Ok(Outcome::new(format!("falsified={found}"), v).verdict(!found))
                }
                DiscriminateMode::Verbal => {
                    let m = model()?;
                    let v = nilpotent::verbal_subgroup(&m, &ws()?, *radius, opts)?;
                    let inv: Vec<String> = v.invariant_factors.iter().map(|x| x.to_string()).collect();
                    Ok(Outcome::new(
                        format!("free_rank={} invariant_factors={:?} stable={}", v.free_rank, inv, v.stable),
                        json!({
                            "order": v.order.as_ref().map(|x| x.to_string()),
                            "free_rank": v.free_rank,
                            "invariant_factors": inv,
                            "stable": v.stable,
                            "values": v.values,
                        }),
                    ))
                }
            }
        }
        Command::Distinctive { word, k, radius, girth } => {
            if *girth {
                let t = identity::abert::girth_triple(*radius, opts)?;
                let tuple: Vec<String> = t.tuple.iter().map(|e| e.render()).collect();
                return Ok(Outcome::new(
                    format!("tuple={tuple:?}"),
                    json!({"tuple": tuple, "candidates": t.candidates, "radius": radius}),
                ));
            }
            let w = parse_word(word.as_deref().ok_or_else(|| Error::Param("--word is required".into()))?, 3)?;
            let d = identity::abert::distinctive_tuple(&w, *k, *radius, opts)?;
            let tuple: Vec<String> = d.tuple.iter().map(|e| e.render()).collect();
            let points: Vec<String> = d.points.iter().map(|p| p.iter().map(|b| (b'0' + b) as char).collect()).collect();
            Ok(Outcome::new(
                format!("tuple={tuple:?} repairs={}", d.repairs),
                json!({"tuple": tuple, "points": points, "repairs": d.repairs}),
            ))
        }
        Command::Sentence { sentence: text, group, gens, rho } => {
            let src = match text.as_str() {
                "commtrans" => sentence::COMMUTATIVE_TRANSITIVITY,
                "n22" => sentence::N22_SENTENCE,
                other => other,
            };
            let s = sentence::parse_sentence(src)?;
            let mg = marked(group, gens)?;
            match sentence::evaluate_sentence_on_ball(&mg, &s, *rho, opts)? {
                sentence::SentenceVerdict::HoldsOnBall { radius, tuples } => Ok(Outcome::new(
                    format!("holds_on_ball radius={radius} tuples={tuples}"),
                    json!({"sentence": src, "holds": true, "radius": radius, "tuples": tuples}),
                )),
                sentence::SentenceVerdict::Witness { tuple } => {
                    let nm = names(mg.arity());
                    let t: Vec<String> = tuple.iter().map(|w| w.render(&nm)).collect();
                    Ok(Outcome::new(format!("falsified tuple={t:?}"), json!({"sentence": src, "holds": false, "tuple": t})).verdict(false))
                }
            }
        }
        Command::Merge { words } => {
            let ws: Vec<Word> = words.iter().map(|s| parse_any_word(s)).collect::<Result<_>>()?;
            let m = identity::merge_identities(&ws)?;
            let r = m.render(&names(m.arity().max(1)));
            Ok(Outcome::new(r.clone(), json!({"word": r, "length": m.len()})))
        }
        Command::Smallcancel { words, lambda, rank, count, min_len } => {
            let (num, den) = lambda
                .split_once('/')
                .and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)))
                .filter(|&(_, d)| d > 0)
                .ok_or_else(|| Error::Param(format!("bad λ {lambda}")))?;
            let ws: Vec<Word> = if words.is_empty() {
                smallcancel::small_cancellation_words(*rank, *count, *min_len)?
            } else {
                words.iter().map(|s| parse_any_word(s)).collect::<Result<_>>()?
            };
            let k = ws.iter().map(|w| w.arity()).max().unwrap_or(1).max(*rank.min(&64));
            let sc = smallcancel::verify_small_cancellation(&ws, num, den);
            let rendered: Vec<String> = ws.iter().map(|w| w.render(&names(k))).collect();
            Ok(Outcome::new(
                format!("ok={} max_piece={} min_len={}", sc.ok, sc.max_piece, sc.min_len),
                json!({"words": rendered, "ok": sc.ok, "max_piece": sc.max_piece, "min_len": sc.min_len}),
            )
            .verdict(sc.ok))
        }
        Command::Alpha { tol } => {
            let a = growth::solve_alpha(*tol)?;
            Ok(Outcome::new(
                format!("alpha={:.10} bracket=[{:.12}, {:.12}]", a.alpha, a.lo, a.hi),
                json!({"alpha": a.alpha, "lo": a.lo, "hi": a.hi, "residual_lo": a.residual_lo, "residual_hi": a.residual_hi, "steps": a.steps}),
            ))
        }
        Command::Nueg { lamp, radii } => {
            let rs: Vec<u32> = u64_list(radii)?.into_iter().map(|r| r as u32).collect();
            let rows = growth::nueg_signature(&parse_group(lamp)?, &rs, opts)?;
            let csv = growth::nueg_csv(&rows);
            let all = rows.iter().all(|r| r.agree);
            let v: Vec<Value> = rows
                .iter()
                .map(|r| json!({"R": r.radius, "nu_witness": r.nu_witness, "nu_std": r.nu_std, "agree": r.agree, "marking": r.marking}))
                .collect();
            let mut o = Outcome::new(csv.trim_end().to_string(), json!({"rows": v}));
            o.csv = Some(csv);
            Ok(o.verdict(all))
        }
    }
}

const WITNESS_LONG: &[&str] =
    &["threads", "max-states", "output", "omit-timings", "format", "radius", "params", "verify-radius", "words", "help"];

/// For `witness` and `transport`, unknown `--key value` pairs are case parameters.
fn split_extra(argv: &[String]) -> (Vec<String>, witness::Params) {
    let mut extra = witness::Params::new();
    let is_witness = argv.iter().skip(1).find(|a| !a.starts_with('-')).is_some_and(|c| c == "witness" || c == "transport");
    if !is_witness {
        return (argv.to_vec(), extra);
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < argv.len() {
        let a = &argv[i];
        if let Some(key) = a.strip_prefix("--") {
            let (key, inline) = match key.split_once('=') {
                Some((k, v)) => (k, Some(v.to_string())),
                None => (key, None),
            };
            if !WITNESS_LONG.contains(&key) {
                let value = match inline {
                    Some(v) => v,
                    None if i + 1 < argv.len() => {
                        i += 1;
                        argv[i].clone()
                    }
                    None => String::new(),
                };
                extra.insert(key.to_string(), Value::String(value));
                i += 1;
                continue;
            }
        }
        out.push(a.clone());
        i += 1;
    }
    (out, extra)
}

/// Report: {tool_version, config, result, timings}.
pub fn report(cli: &Cli, extra: &witness::Params, outcome: &Outcome, millis: u128, threads: usize) -> Value {
    let mut config = serde_json::to_value(&cli.cmd).expect("config");
    if !extra.is_empty() {
        config["extra_params"] = json!(extra);
    }
    config["max_states"] = json!(cli.max_states);
    config["format"] = json!(cli.format);
    let mut rep = json!({"tool_version": TOOL_VERSION, "config": config, "result": outcome.result});
    if !cli.omit_timings {
        rep["timings"] = json!({"millis": millis as u64, "threads": threads});
    }
    rep
}

pub fn run(argv: &[String]) -> i32 {
    let (args, extra) = split_extra(argv);
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if cli.max_states == 0 || cli.threads == Some(0) {
        eprintln!("error: caps and thread counts must be positive");
        return 2;
    }
    let threads = cli.threads.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let opts = BallOptions::with_threads(threads).cap(cli.max_states);
    let pool = opts.pool.clone().expect("pool");
    let start = Instant::now();
    let outcome = match pool.install(|| execute(&cli.cmd, &opts, &extra)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let millis = start.elapsed().as_millis();
    let rep = report(&cli, &extra, &outcome, millis, threads);
    let rendered = serde_json::to_string_pretty(&rep).expect("report");
    let stdout = match (cli.format, &outcome.csv) {
        (Format::Json, _) => rendered.clone(),
        (Format::Csv, Some(csv)) => csv.trim_end().to_string(),
        _ => outcome.summary.clone(),
    };
    if let Some(path) = &cli.output {
        let payload = match (&outcome.file, cli.format, &outcome.csv) {
            (Some(f), _, _) => f.clone(),
            (None, Format::Csv, Some(csv)) => csv.clone(),
            _ => rendered + "\n",
        };
        if let Err(e) = std::fs::write(path, payload) {
            eprintln!("error: {}: {e}", path.display());
            return 2;
        }
    }
    println!("{stdout}");
    outcome.exit
}
