use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use surveycode::eval::{evaluate, render_table, EvalReport};
use surveycode::io::write_atomic;
use surveycode::multilabel::Algorithm;
use surveycode::pipeline::*;
use surveycode::synthetic::{correlated_corpus, CorrelatedCorpusConfig};

#[derive(Parser)]
#[command(
    name = "surveycode",
    version,
    about = "Multi-label coding of open-ended survey answers"
)]
struct Cli {
    /// TOML configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for splitting, SVM training and ECC sampling (overrides the config)
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArg {
    /// Answers CSV (overrides dataset.path from the config)
    #[arg(long)]
    data: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Dataset statistics and inter-coder agreement
    Stats {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Write a seeded train/validation/test split
    Split {
        #[command(flatten)]
        data: DataArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Grid search over kernel, C and gamma on the validation part
    Gridsearch {
        #[command(flatten)]
        data: DataArg,
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        algorithm: Algorithm,
        /// Write all cell losses as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train on the split's training part and save a model file
    Train {
        #[command(flatten)]
        data: DataArg,
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        algorithm: Algorithm,
        /// Replace empty predictions by the best-scoring label
        #[arg(long)]
        min1: bool,
        #[arg(long)]
        model: PathBuf,
    },
    /// Predict answers and write an interchange file
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// CSV with id and text columns; labels are not needed
        #[arg(long)]
        answers: PathBuf,
        /// Only predict the test part of this split
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a model on the split's test part
    Evaluate {
        #[command(flatten)]
        data: DataArg,
        #[arg(long)]
        split: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Also write the test predictions
        #[arg(long)]
        predictions: Option<PathBuf>,
    },
    /// Split predictions into automatically accepted and manual items
    Triage {
        #[arg(long)]
        predictions: PathBuf,
        /// Model file supplying the label space
        #[arg(long)]
        model: PathBuf,
        /// Coded answers; enables the loss of the automatic subset
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate interchange files produced elsewhere against the dataset
    ImportEval {
        #[command(flatten)]
        data: DataArg,
        #[arg(long = "predictions", required = true, num_args = 1..)]
        files: Vec<PathBuf>,
    },
    /// Split, train, predict and evaluate several algorithms in one go
    Run {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, value_delimiter = ',', default_value = "br,lp,cc,ecc")]
        algorithms: Vec<Algorithm>,
        #[arg(long)]
        min1: bool,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Write a synthetic coded corpus
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1000)]
        records: usize,
        #[arg(long, default_value_t = 2024)]
        corpus_seed: u64,
    },
}

fn load_config(cli: &Cli) -> Result<ToolkitConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ToolkitConfig::load(p).with_context(|| format!("reading config {}", p.display()))?,
        None => ToolkitConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.set_seed(seed);
    }
    Ok(cfg)
}

fn dataset_spec(cfg: &ToolkitConfig, data: &DataArg) -> Result<DatasetSpec> {
    let mut spec = cfg.dataset.clone();
    if let Some(p) = &data.data {
        spec.path = p.clone();
    }
    if spec.path.as_os_str().is_empty() {
        bail!("no dataset: pass --data or set dataset.path in the config");
    }
    Ok(spec)
}

fn load(cfg: &ToolkitConfig, data: &DataArg) -> Result<Dataset> {
    let spec = dataset_spec(cfg, data)?;
    load_dataset(&spec).with_context(|| format!("loading {}", spec.path.display()))
}

fn load_split(path: &Path, dataset: &Dataset) -> Result<Split> {
    let s = Split::load(path)?;
    s.check_against(dataset)
        .with_context(|| format!("{} does not match the dataset", path.display()))?;
    Ok(s)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    write_atomic(path, text.as_bytes()).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(&cli)?;
    match cli.command {
        Command::Stats { data, top } => {
            let d = load(&cfg, &data)?;
            print!("{}", dataset_stats(&d, top)?.render());
        }
        Command::Split { data, out } => {
            let d = load(&cfg, &data)?;
            let s = split(&d, &cfg.split)?;
            s.save(&out)?;
            println!(
                "train {}  validation {}  test {}  (seed {})",
                s.train.len(),
                s.validation.len(),
                s.test.len(),
                s.seed
            );
        }
        Command::Gridsearch {
            data,
            split,
            algorithm,
            out,
        } => {
            let d = load(&cfg, &data)?;
            let s = load_split(&split, &d)?;
            let r = tune(&d, &s, algorithm, &cfg.grid, &cfg.experiment()?)?;
            for cell in &r.cells {
                let cell_name = format!("{} C={}", cell.config.kernel, cell.config.c);
                println!("{cell_name:<28} {:.4}", cell.validation_loss);
            }
            println!(
                "best: {} C={} validation 0/1 loss {:.4}",
                r.best.kernel, r.best.c, r.best_loss
            );
            if let Some(out) = out {
                write_json(&out, &r)?;
            }
        }
        Command::Train {
            data,
            split,
            algorithm,
            min1,
            model,
        } => {
            let d = load(&cfg, &data)?;
            let s = load_split(&split, &d)?;
            let mut exp = cfg.experiment()?;
            exp.force_min_one |= min1;
            let bundle = train_model(&d, &s.train, algorithm, &exp)?;
            bundle.save(&model)?;
            println!(
                "{} trained on {} answers -> {}",
                bundle.model_tag,
                s.train.len(),
                model.display()
            );
        }
        Command::Predict {
            model,
            answers,
            split,
            out,
        } => {
            let bundle = ModelBundle::load(&model)?;
            let spec = DatasetSpec {
                path: answers,
                ..cfg.dataset.clone()
            };
            let mut raw = load_answers(&spec)?;
            if let Some(p) = split {
                let s = Split::load(&p)?;
                let test: std::collections::HashSet<&String> = s.test.iter().collect();
                raw.retain(|a| test.contains(&a.record_id));
                if raw.len() != s.test.len() {
                    bail!(
                        "{} test ids are missing from the answers file",
                        s.test.len() - raw.len()
                    );
                }
            }
            let preds = bundle.predict(&raw)?;
            write_predictions(&out, &preds, &bundle.label_space)?;
            println!("{} predictions -> {}", preds.len(), out.display());
        }
        Command::Evaluate {
            data,
            split,
            model,
            predictions,
        } => {
            let d = load(&cfg, &data)?;
            let s = load_split(&split, &d)?;
            let bundle = ModelBundle::load(&model)?;
            if bundle.label_space != d.space {
                bail!("model and dataset use different label spaces");
            }
            let preds = predict_records(&bundle, &d.select(&s.test)?)?;
            if let Some(p) = predictions {
                write_predictions(&p, &preds, &d.space)?;
            }
            print!("{}", render_table(&[evaluate(&preds, &d.space)?]));
        }
        Command::Triage {
            predictions,
            model,
            truth,
            out,
        } => {
            let bundle = ModelBundle::load(&model)?;
            let mut preds = import_predictions(&predictions, &bundle.label_space)?;
            if let Some(t) = truth {
                let spec = DatasetSpec {
                    path: t,
                    codes: Some(bundle.label_space.codes().to_vec()),
                    ..cfg.dataset.clone()
                };
                attach_truth(&mut preds, &load_dataset(&spec)?)?;
            }
            let report = triage(&preds, &bundle.label_space);
            print!("{}", report.render());
            if let Some(out) = out {
                write_json(&out, &report)?;
            }
        }
        Command::ImportEval { data, files } => {
            let d = load(&cfg, &data)?;
            let reports = files
                .iter()
                .map(|f| {
                    let mut preds = import_predictions(f, &d.space)?;
                    attach_truth(&mut preds, &d)?;
                    Ok(evaluate(&preds, &d.space)?)
                })
                .collect::<Result<Vec<EvalReport>>>()?;
            print!("{}", render_table(&reports));
        }
        Command::Run {
            data,
            algorithms,
            min1,
            out_dir,
        } => {
            let d = load(&cfg, &data)?;
            std::fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            let s = split(&d, &cfg.split)?;
            s.save(&out_dir.join("split.json"))?;
            let mut exp = cfg.experiment()?;
            exp.force_min_one |= min1;
            let mut reports = Vec::new();
            for alg in algorithms {
                let outcome = run_experiment(&d, &s, alg, &exp)?;
                let tag = &outcome.bundle.model_tag;
                outcome.bundle.save(&out_dir.join(format!("{tag}.model.json")))?;
                write_predictions(&out_dir.join(format!("{tag}.jsonl")), &outcome.predictions, &d.space)?;
                reports.push(outcome.report);
            }
            reports.sort_by(|a, b| a.overall_zero_one.total_cmp(&b.overall_zero_one));
            print!("{}", render_table(&reports));
        }
        Command::Synth {
            out,
            records,
            corpus_seed,
        } => {
            let corpus = correlated_corpus(&CorrelatedCorpusConfig {
                n_records: records,
                seed: corpus_seed,
                ..CorrelatedCorpusConfig::default()
            });
            write_dataset(&out, &corpus.dataset)?;
            println!("{records} answers -> {}", out.display());
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
