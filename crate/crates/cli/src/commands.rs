use std::fs::{self, File};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reap_core::engine::{decide_with, DecideOptions, FailureBasis, Verdict};
use reap_core::kb::{
    self, bridge, close_kb, hasse_dot, open_problems, Answer, Certificate, KnowledgeBase,
    OrderConfig, Pair, SeedOptions,
};
use reap_core::polarized::{find_violation, search_witness, PolMatrix, PolQuery, PolSearchOutcome};
use reap_core::{
    min_colors, min_colors_witness, modular_witness, subtree_leaves, Coloring, PropertyQuery,
    TreeShape,
};
use serde_json::json;

use crate::cli::{Cli, Command, Format, OrderCommand, PolarizedCommand, RunArgs, Toggle};
use crate::render;
use crate::Exit;

pub fn run(cli: Cli) -> Result<Exit> {
    let run = &cli.run;
    if run.budget == 0 || run.max_depth == 0 || run.parallelism == 0 {
        bail!("--budget, --max-depth and --parallelism must be positive");
    }
    match cli.command {
        Command::Verify { file, k, m, random } => {
            verify(run, file.as_deref(), random.as_deref(), k, m)
        }
        Command::Decide { i, j, k, m, out } => {
            decide(run, PropertyQuery::new(i, j, k, m)?, out.as_deref())
        }
        Command::Order { command } => order(run, command),
        Command::Polarized { command } => polarized(run, command),
        Command::OpenProblems => open(run),
    }
}

fn config(run: &RunArgs) -> OrderConfig {
    OrderConfig {
        seed: SeedOptions {
            laflamme: run.laflamme == Toggle::On,
            ..SeedOptions::default()
        },
        decide: DecideOptions {
            max_depth: run.max_depth,
            budget: run.budget,
            parallelism: run.parallelism,
        },
    }
}

/// The knowledge base, held under an exclusive lock until dropped.
struct Session {
    path: PathBuf,
    kb: KnowledgeBase,
    loaded: KnowledgeBase,
    _lock: File,
}

impl Session {
    fn open(run: &RunArgs) -> Result<Session> {
        let lock_path = run.kb.with_extension("lock");
        let lock = File::create(&lock_path)
            .with_context(|| format!("creating {}", lock_path.display()))?;
        lock.lock()
            .with_context(|| format!("locking {}", lock_path.display()))?;
        let mut kb = KnowledgeBase::load(&run.kb)?;
        let loaded = kb.clone();
        if !run.no_fixtures {
            kb::load_fixtures(&mut kb);
        }
        Ok(Session {
            path: run.kb.clone(),
            kb,
            loaded,
            _lock: lock,
        })
    }

    fn save(&self) -> Result<()> {
        if self.kb != self.loaded {
            self.kb.save(&self.path)?;
        }
        Ok(())
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn verify(
    run: &RunArgs,
    file: Option<&Path>,
    random: Option<&[usize]>,
    k: usize,
    m: usize,
) -> Result<Exit> {
    let coloring: Coloring = match (file, random) {
        (Some(path), _) => read_json(path)?,
        (None, Some(&[i, h, j])) => {
            let shape = TreeShape::new(i, h)?;
            let mut rng = ChaCha8Rng::seed_from_u64(run.seed);
            Coloring::new(
                shape,
                j,
                (0..shape.leaf_count())
                    .map(|_| rng.gen_range(0..j.max(1)))
                    .collect(),
            )?
        }
        _ => bail!("give a coloring file or --random I H J"),
    };
    if m == 0 {
        bail!("m must be at least 1");
    }
    let least = min_colors(&coloring, k, 64)?.value();
    let defeated = least.is_none_or(|v| v > m);
    let witness = if defeated {
        None
    } else {
        min_colors_witness(&coloring, k, m)?
    };
    let witness_json = witness
        .as_ref()
        .map(|w| -> Result<_> {
            Ok(json!({"colors": w.color_list(), "leaves": subtree_leaves(&w.cert)?, "subtree": w.cert}))
        })
        .transpose()?;
    let report = json!({
        "i": coloring.shape().branching(),
        "h": coloring.shape().depth(),
        "j": coloring.colors(),
        "k": k,
        "m": m,
        "defeats": defeated,
        "min_colors": least,
        "witness": witness_json,
    });
    match run.format.unwrap_or(Format::Text) {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        _ => {
            println!(
                "coloring of T({},{}) with {} colors; k={k} m={m}",
                coloring.shape().depth(),
                coloring.shape().branching(),
                coloring.colors()
            );
            println!(
                "min_colors: {}",
                least.map_or("more than 64".into(), |v| v.to_string())
            );
            println!("defeats: {}", if defeated { "yes" } else { "no" });
            if let Some(w) = &witness {
                println!(
                    "witness subtree colors {:?}, leaves {:?}",
                    w.color_list(),
                    subtree_leaves(&w.cert)?
                );
            }
        }
    }
    Ok(if defeated { Exit::Yes } else { Exit::No })
}

fn decide(run: &RunArgs, query: PropertyQuery, out: Option<&Path>) -> Result<Exit> {
    let mut session = Session::open(run)?;
    let options = config(run).decide;
    let decision = decide_with(
        &query,
        &options,
        &session.kb.colorings(),
        &session.kb.searches,
    )?;
    session.kb.record_searches(&decision.searches);
    let mut certificate = None;
    if let Verdict::Fails { witness, basis, .. } = &decision.verdict {
        if matches!(basis, FailureBasis::Search | FailureBasis::Certificate) {
            certificate = Some(
                session
                    .kb
                    .add_certificate(Certificate::Coloring(witness.clone())),
            );
        }
        if let Some(path) = out {
            fs::write(path, serde_json::to_string(witness)? + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    let (lhs, rhs) = (Pair::new(query.i, query.k), Pair::new(query.j, query.m + 1));
    if lhs.is_valid() && rhs.is_valid() {
        if let Some((fact, cert)) = bridge(lhs, rhs, &decision)? {
            if let Some(cert) = cert {
                session.kb.add_certificate(cert);
            }
            session.kb.add_fact(fact);
        }
    }
    session.save()?;
    match run.format.unwrap_or(Format::Json) {
        Format::Text => print!("{}", render::decision_text(&decision)),
        _ => {
            let mut value = serde_json::to_value(&decision)?;
            value["certificate"] = json!(certificate);
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
    }
    Ok(match decision.verdict {
        Verdict::Fails { .. } => Exit::Yes,
        Verdict::Holds { .. } => Exit::No,
        Verdict::Unknown { .. } => Exit::Unknown,
    })
}

fn order(run: &RunArgs, command: OrderCommand) -> Result<Exit> {
    let mut session = Session::open(run)?;
    let config = config(run);
    let exit = match command {
        OrderCommand::Query { n, m, i, j } => {
            let result = kb::query(&mut session.kb, Pair::new(n, m), Pair::new(i, j), &config)?;
            match run.format.unwrap_or(Format::Text) {
                Format::Json => println!("{}", serde_json::to_string_pretty(&result)?),
                _ => print!("{}", render::query_text(&result)),
            }
            match result.answer {
                Answer::Le => Exit::Yes,
                Answer::Nle => Exit::No,
                Answer::Open => Exit::Unknown,
            }
        }
        OrderCommand::Table { max_n, no_search } => {
            if max_n < 2 {
                bail!("table needs max_n >= 2");
            }
            let cells = kb::table(&mut session.kb, max_n, &config, !no_search)?;
            match run.format.unwrap_or(Format::Text) {
                Format::Json => println!("{}", serde_json::to_string_pretty(&cells)?),
                Format::Csv => print!("{}", render::table_csv(&cells)),
                Format::Text => print!("{}", render::table_text(&cells, max_n)),
                Format::Dot => bail!("the table has no DOT form; use `order hasse`"),
            }
            Exit::Yes
        }
        OrderCommand::Hasse { max_n } => {
            if max_n < 2 {
                bail!("hasse needs max_n >= 2");
            }
            let seed = SeedOptions {
                universe: max_n,
                ..config.seed
            };
            print!("{}", hasse_dot(&close_kb(&session.kb, seed, &[])?));
            Exit::Yes
        }
    };
    session.save()?;
    Ok(exit)
}

fn polarized(run: &RunArgs, command: PolarizedCommand) -> Result<Exit> {
    match command {
        PolarizedCommand::Check {
            file,
            modular,
            i,
            j,
            q,
        } => {
            let matrix: PolMatrix = match (file, modular) {
                (Some(path), _) => read_json(&path)?,
                (None, Some(n)) => modular_witness(n)?,
                (None, None) => bail!("give --file or --modular"),
            };
            let query = PolQuery { i, j, q };
            let violation = find_violation(&matrix, &query)?;
            match run.format.unwrap_or(Format::Text) {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "matrix": matrix,
                        "query": query,
                        "witness": violation.is_none(),
                        "violation": violation.as_ref().map(|(r, c)| json!({"rows": r, "cols": c})),
                    }))?
                ),
                _ => {
                    print!("{}", render::matrix_text(&matrix));
                    match &violation {
                        None => println!("every {i}x{j} rectangle takes more than {q} values"),
                        Some((rows, cols)) => {
                            println!("rows {rows:?} x cols {cols:?} take at most {q} values")
                        }
                    }
                }
            }
            Ok(if violation.is_none() {
                Exit::Yes
            } else {
                Exit::No
            })
        }
        PolarizedCommand::Search { n, m, k, i, j, q } => {
            let outcome = search_witness(n, m, k, &PolQuery { i, j, q }, run.budget)?;
            match run.format.unwrap_or(Format::Text) {
                Format::Json => println!("{}", serde_json::to_string_pretty(&outcome)?),
                _ => match &outcome {
                    PolSearchOutcome::Found { matrix, nodes } => {
                        println!("witness found after {nodes} nodes");
                        print!("{}", render::matrix_text(matrix));
                    }
                    PolSearchOutcome::NoneFound { nodes } => {
                        println!("no witness exists ({nodes} nodes)")
                    }
                    PolSearchOutcome::BudgetExhausted { nodes } => {
                        println!("budget exhausted after {nodes} nodes")
                    }
                },
            }
            Ok(match outcome {
                PolSearchOutcome::Found { .. } => Exit::Yes,
                PolSearchOutcome::NoneFound { .. } => Exit::No,
                PolSearchOutcome::BudgetExhausted { .. } => Exit::Unknown,
            })
        }
    }
}

fn open(run: &RunArgs) -> Result<Exit> {
    let mut session = Session::open(run)?;
    let targets = open_problems(&mut session.kb, &config(run))?;
    session.save()?;
    match run.format.unwrap_or(Format::Text) {
        Format::Json => println!("{}", serde_json::to_string_pretty(&targets)?),
        _ => print!("{}", render::open_text(&targets)),
    }
    Ok(Exit::Yes)
}
