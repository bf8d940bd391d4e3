use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use spikesig::analysis::{
    mean_class_distances, prototype_classify, train_net_input_svm, within_between, write_distance_csv, ConfusionMatrix,
};
use spikesig::corpus::{load_wav, write_wav, AudioClip, CorpusManifest, ManifestEntry, Split, N_CLASSES};
use spikesig::features::{write_features_csv, write_spectrogram_pgm, CurrentScaler, FeatureMatrix};
use spikesig::pipeline::{classify, extract_features, labels_of, net_inputs, signatures_of, synth_splits};
use spikesig::signatures::{export_raster, prototypes, raster_svg, spikes_from_text, PrototypeSet, Signature};
use spikesig::snn::{train, write_weight_image, TrainingLog};
use spikesig::synapse::SynapseMatrix;

use crate::config::RunConfig;
use crate::error::CliError;

/// Row/column order of exported confusion matrices.
pub const DISPLAY_ORDER: [usize; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 0];

pub const WEIGHTS_FILE: &str = "weights.txt";
pub const SCALER_FILE: &str = "scaler.toml";
pub const LOG_FILE: &str = "training_log.csv";
pub const CONFIG_FILE: &str = "config.toml";
pub const META_FILE: &str = "run.meta";

type Result<T> = std::result::Result<T, CliError>;

/// Records which command produced a directory's contents and from what.
pub fn write_meta(dir: &Path, command: &str, cfg: &RunConfig) -> Result<()> {
    let path = dir.join(META_FILE);
    let mut meta: toml::Table =
        std::fs::read_to_string(&path).ok().and_then(|t| t.parse().ok()).unwrap_or_default();
    meta.insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
    let mut entry = toml::Table::new();
    entry.insert("seed".into(), toml::Value::Integer(cfg.seed as i64));
    entry.insert("config_sha256".into(), cfg.hash().into());
    entry.insert("tool_version".into(), env!("CARGO_PKG_VERSION").into());
    meta.insert(command.into(), entry.into());
    std::fs::write(path, toml::to_string(&meta).expect("meta serializes"))?;
    Ok(())
}

fn seed_line(cfg: &RunConfig) {
    println!("# seed={}", cfg.seed);
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))
}

fn split_dir(split: Split) -> &'static str {
    split.name()
}

pub fn synth(cfg: &RunConfig, out: &Path, force: bool) -> Result<()> {
    if out.exists() {
        let non_empty = std::fs::read_dir(out)?.next().is_some();
        if non_empty && !force {
            return Err(CliError::Config(format!("{} is not empty; pass --force to overwrite", out.display())));
        }
        if force {
            for split in Split::ALL {
                let d = out.join(split_dir(split));
                if d.is_dir() {
                    std::fs::remove_dir_all(d)?;
                }
            }
        }
    }
    let splits = synth_splits::<f64>(cfg.seed, &cfg.corpus())?;
    seed_line(cfg);
    for (split, clips) in [(Split::Train, &splits.train), (Split::TestClean, &splits.test_clean), (Split::TestNoisy, &splits.test_noisy)] {
        let dir = out.join(split_dir(split));
        create_dir(&dir)?;
        clips.par_iter().try_for_each(|c| write_wav(dir.join(format!("{}.wav", c.id)), c))?;
        let entries = clips
            .iter()
            .map(|c| ManifestEntry { path: PathBuf::from(split_dir(split)).join(format!("{}.wav", c.id)), label: c.label.unwrap_or(0) })
            .collect();
        CorpusManifest::new(split, entries)?.write(out.join(format!("{}.csv", split.name())))?;
        println!("{}: {} clips", split.name(), clips.len());
    }
    println!("total: {} clips", splits.train.len() + splits.test_clean.len() + splits.test_noisy.len());
    write_meta(out, "synth", cfg)
}

/// Loads every clip listed in a manifest; ids are the file stems.
pub fn load_manifest(path: &Path, split: Split) -> Result<Vec<AudioClip<f64>>> {
    let m = CorpusManifest::read(path, split).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    if m.entries.is_empty() {
        return Err(CliError::Data(format!("{}: manifest lists no clips", path.display())));
    }
    m.entries
        .par_iter()
        .map(|e| {
            let p = CorpusManifest::resolve(path, e);
            let mut clip = load_wav::<f64>(&p, Some(e.label)).map_err(|err| CliError::Data(format!("{}: {err}", p.display())))?;
            clip.id = p.file_stem().map_or_else(|| clip.id.clone(), |s| s.to_string_lossy().into_owned());
            Ok(clip)
        })
        .collect()
}

fn manifest_features(cfg: &RunConfig, path: &Path, split: Split) -> Result<Vec<FeatureMatrix<f64>>> {
    let x = cfg.experiment();
    let clips = load_manifest(path, split)?;
    Ok(extract_features(&clips, &x.framing, &x.bands()?)?)
}

pub fn features(cfg: &RunConfig, manifest: &Path, out: &Path) -> Result<()> {
    let feats = manifest_features(cfg, manifest, Split::Train)?;
    create_dir(out)?;
    feats.par_iter().try_for_each(|f| write_features_csv(out.join(format!("{}.csv", f.id)), f))?;
    seed_line(cfg);
    println!("wrote {} feature matrices ({} frames x {} bands)", feats.len(), cfg.framing.n_frames, cfg.bands.n_bands);
    write_meta(out, "features", cfg)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScalerFile {
    i_min: f64,
    i_max: f64,
    feature_min: f64,
    feature_max: f64,
}

pub fn training_log_csv(log: &TrainingLog<f64>, seed: u64) -> String {
    let mut s = format!("# seed={seed}\nepoch,mean_abs_dK,spikes_target,spikes_nontarget\n");
    for e in &log.epochs {
        let _ = writeln!(s, "{},{},{},{}", e.epoch, e.mean_abs_dk, e.spikes_target, e.spikes_nontarget);
    }
    s
}

pub fn train_cmd(cfg: &RunConfig, manifest: &Path, run: &Path) -> Result<()> {
    let x = cfg.experiment();
    let feats = manifest_features(cfg, manifest, Split::Train)?;
    let scaler = CurrentScaler::fit(&feats, x.i_min, x.i_max)?;
    let (weights, log) = train(&feats, &scaler, &x.network, &x.stdp, x.seed)?;

    create_dir(run)?;
    weights.save(run.join(WEIGHTS_FILE))?;
    let sf = ScalerFile { i_min: scaler.i_min, i_max: scaler.i_max, feature_min: scaler.feature_min, feature_max: scaler.feature_max };
    std::fs::write(run.join(SCALER_FILE), toml::to_string(&sf).expect("scaler serializes"))?;
    std::fs::write(run.join(LOG_FILE), training_log_csv(&log, cfg.seed))?;
    std::fs::write(run.join(CONFIG_FILE), cfg.to_toml())?;

    seed_line(cfg);
    println!("trained on {} samples for {} epochs", feats.len(), log.epochs.len());
    if let Some(last) = log.epochs.last() {
        println!("final epoch: mean |dK| = {:.3e}, target spikes = {}, non-target spikes = {}", last.mean_abs_dk, last.spikes_target, last.spikes_nontarget);
    }
    write_meta(run, "train", cfg)
}

struct TrainedRun {
    weights: SynapseMatrix<f64>,
    scaler: CurrentScaler<f64>,
}

fn load_run(cfg: &RunConfig, run: &Path) -> Result<TrainedRun> {
    let weights = SynapseMatrix::<f64>::load(run.join(WEIGHTS_FILE))
        .map_err(|e| CliError::Data(format!("{}: {e}", run.join(WEIGHTS_FILE).display())))?;
    let net = cfg.experiment().network;
    if (weights.rows(), weights.cols()) != (net.n_inputs(), net.n_outputs) {
        return Err(CliError::Data(format!(
            "weights are {}x{}, configuration expects {}x{}",
            weights.rows(),
            weights.cols(),
            net.n_inputs(),
            net.n_outputs
        )));
    }
    let text = std::fs::read_to_string(run.join(SCALER_FILE))
        .map_err(|e| CliError::Data(format!("{}: {e}", run.join(SCALER_FILE).display())))?;
    let sf: ScalerFile = toml::from_str(&text).map_err(|e| CliError::Data(format!("{SCALER_FILE}: {e}")))?;
    let scaler = CurrentScaler::new(sf.i_min, sf.i_max, sf.feature_min, sf.feature_max)?;
    Ok(TrainedRun { weights, scaler })
}

impl TrainedRun {
    fn signatures(&self, cfg: &RunConfig, feats: &[FeatureMatrix<f64>]) -> Result<Vec<Signature<f64>>> {
        let x = cfg.experiment();
        Ok(signatures_of(feats, &self.weights, &self.scaler, &x.network, &x.signature)?)
    }

    fn prototypes(&self, cfg: &RunConfig, train_f: &[FeatureMatrix<f64>]) -> Result<PrototypeSet<f64>> {
        let x = cfg.experiment();
        Ok(prototypes(train_f, &self.weights, &self.scaler, &x.network, &x.signature)?)
    }
}

pub fn signatures_cmd(cfg: &RunConfig, run: &Path, train_m: &Path, test_m: Option<&Path>, count: Option<usize>) -> Result<()> {
    let trained = load_run(cfg, run)?;
    let protos = trained.prototypes(cfg, &manifest_features(cfg, train_m, Split::Train)?)?;
    let dir = run.join("signatures");
    create_dir(&dir)?;
    for (c, p) in protos.prototypes.iter().enumerate() {
        export_raster(&p.trains, dir.join(format!("proto_{c}")), &format!("prototype {c} (seed {})", cfg.seed))?;
    }
    let mut n_tests = 0;
    if let Some(test_m) = test_m {
        let mut clips = load_manifest(test_m, Split::TestClean)?;
        clips.truncate(count.unwrap_or(clips.len()));
        let x = cfg.experiment();
        let feats = extract_features(&clips, &x.framing, &x.bands()?)?;
        let sigs = trained.signatures(cfg, &feats)?;
        for s in &sigs {
            let title = format!("{} label {} (seed {})", s.id, s.label.map_or("?".into(), |l| l.to_string()), cfg.seed);
            export_raster(&s.trains, dir.join(&s.id), &title)?;
        }
        n_tests = sigs.len();
    }
    seed_line(cfg);
    println!("prototype signatures: {} ({} spikes)", protos.len(), protos.total_spikes());
    println!("test signatures: {n_tests}");
    write_meta(run, "signatures", cfg)
}

/// Column headers of the distance table.
pub fn test_class_columns() -> Vec<String> {
    (0..N_CLASSES).map(|c| format!("test_{c}")).collect()
}

pub fn distance_cmd(cfg: &RunConfig, run: &Path, train_m: &Path, test_m: &Path, out: Option<&Path>) -> Result<()> {
    let trained = load_run(cfg, run)?;
    let protos = trained.prototypes(cfg, &manifest_features(cfg, train_m, Split::Train)?)?;
    let tests = trained.signatures(cfg, &manifest_features(cfg, test_m, Split::TestClean)?)?;
    let table = mean_class_distances(&protos, &tests, cfg.vp.q);
    let (within, between) = within_between(&table);
    if !within.is_finite() || !between.is_finite() {
        return Err(CliError::Numeric("distance table has no finite entries".into()));
    }
    let path = out.map_or_else(|| run.join("distance.csv"), Path::to_path_buf);
    write_distance_csv(&path, &table, &test_class_columns(), Some(cfg.seed))?;
    seed_line(cfg);
    println!("mean within-class distance: {within:.4}");
    println!("mean between-class distance: {between:.4}");
    println!("wrote {}", path.display());
    write_meta(run, "distance", cfg)
}

pub fn accuracy_summary(name: &str, m: &ConfusionMatrix, seed: u64) -> String {
    let mut s = format!("# seed={seed}\n");
    let _ = writeln!(s, "split={name}");
    let _ = writeln!(s, "correct={} total={}", m.trace(), m.total());
    let _ = writeln!(s, "overall_accuracy_pct={:.1}", 100.0 * m.overall_accuracy());
    let _ = writeln!(s, "average_hit_ratio_pct={:.1}", 100.0 * m.average_hit_ratio());
    let _ = writeln!(s, "average_miss_rate_pct={:.1}", 100.0 * m.average_miss_rate());
    s
}

pub fn eval_cmd(cfg: &RunConfig, run: &Path, train_m: &Path, tests: &[PathBuf]) -> Result<()> {
    let x = cfg.experiment();
    let trained = load_run(cfg, run)?;
    let train_f = manifest_features(cfg, train_m, Split::Train)?;
    let train_s = trained.signatures(cfg, &train_f)?;
    let svm = train_net_input_svm(&net_inputs(&train_s)?, &labels_of(&train_s)?, N_CLASSES, &x.svm, x.layout)?;
    let protos = trained.prototypes(cfg, &train_f)?;

    seed_line(cfg);
    let train_cm = classify(&svm, &train_s)?;
    println!("train: {:.1}% ({}/{})", 100.0 * train_cm.overall_accuracy(), train_cm.trace(), train_cm.total());
    for test_m in tests {
        let name = test_m.file_stem().map_or_else(|| "test".into(), |s| s.to_string_lossy().into_owned());
        let sigs = trained.signatures(cfg, &manifest_features(cfg, test_m, Split::TestClean)?)?;
        let cm = classify(&svm, &sigs)?;
        cm.write_csv(run.join(format!("confusion_{name}.csv")), &DISPLAY_ORDER, Some(cfg.seed))?;
        std::fs::write(run.join(format!("accuracy_{name}.txt")), accuracy_summary(&name, &cm, cfg.seed))?;
        let predicted: Vec<usize> = sigs.par_iter().map(|s| prototype_classify(s, &protos, cfg.vp.q)).collect();
        let proto_cm = ConfusionMatrix::from_predictions(&labels_of(&sigs)?, &predicted, N_CLASSES)?;
        println!(
            "{name}: {:.1}% ({}/{}), nearest prototype {:.1}%",
            100.0 * cm.overall_accuracy(),
            cm.trace(),
            cm.total(),
            100.0 * proto_cm.overall_accuracy()
        );
    }
    write_meta(run, "eval", cfg)
}

/// Training-curve SVG: mean |dK| per epoch on a log scale.
pub fn training_curve_svg(log_csv: &str, seed: u64) -> Result<String> {
    let values: Vec<f64> = log_csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("epoch"))
        .map(|l| l.split(',').nth(1).and_then(|v| v.parse().ok()).ok_or_else(|| CliError::Data(format!("bad log line '{l}'"))))
        .collect::<Result<_>>()?;
    let (w, h, pad) = (600.0, 300.0, 40.0);
    let logs: Vec<f64> = values.iter().map(|v| v.max(1e-300).log10()).collect();
    let (lo, hi) = logs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let n = values.len().max(2) - 1;
    let points: Vec<String> = logs
        .iter()
        .enumerate()
        .map(|(i, v)| format!("{:.2},{:.2}", pad + (w - 2.0 * pad) * i as f64 / n as f64, h - pad - (h - 2.0 * pad) * (v - lo) / span))
        .collect();
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(s, r#"<text x="{pad}" y="16">mean |dK| per epoch, log scale (seed {seed})</text>"#);
    let _ = writeln!(s, r#"<polyline fill="none" stroke="black" points="{}"/>"#, points.join(" "));
    let _ = writeln!(s, r#"<text x="{pad}" y="{}">1</text>"#, h - 12.0);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, w - pad, h - 12.0, values.len());
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn plot_cmd(cfg: &RunConfig, run: &Path, manifest: Option<&Path>, count: usize) -> Result<()> {
    let trained = load_run(cfg, run)?;
    let dir = run.join("plots");
    create_dir(&dir)?;
    let net = cfg.experiment().network;
    for c in 0..net.n_outputs {
        write_weight_image(dir.join(format!("weights_unit_{c}.pgm")), &trained.weights, c, net.n_frames, net.n_bands, 8)?;
    }
    let mut written = net.n_outputs;
    if let Ok(log) = std::fs::read_to_string(run.join(LOG_FILE)) {
        std::fs::write(dir.join("training_curve.svg"), training_curve_svg(&log, cfg.seed)?)?;
        written += 1;
    }
    let sig_dir = run.join("signatures");
    if sig_dir.is_dir() {
        let duration = net.n_frames as f64 * cfg.signature.frame_ms;
        for entry in std::fs::read_dir(&sig_dir)? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "spikes") {
                let trains = spikes_from_text::<f64>(&std::fs::read_to_string(&path)?, duration)?;
                let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                std::fs::write(dir.join(format!("{stem}.svg")), raster_svg(&trains, &format!("{stem} (seed {})", cfg.seed)))?;
                written += 1;
            }
        }
    }
    if let Some(m) = manifest {
        let x = cfg.experiment();
        for clip in load_manifest(m, Split::TestClean)?.iter().take(count) {
            write_spectrogram_pgm(dir.join(format!("spectrogram_{}.pgm", clip.id)), clip, &x.framing)?;
            written += 1;
        }
    }
    seed_line(cfg);
    println!("wrote {written} figures to {}", dir.display());
    write_meta(run, "plot", cfg)
}
