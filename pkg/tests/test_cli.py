"""Command line behavior: outputs, manifests, exit codes."""

import json

import numpy as np
import pytest

from graphsub import AudioBuffer, gen_tone_speech, gen_white_noise, write_wav
from graphsub.cli import main

RATE = 16000


@pytest.fixture()
def clips(tmp_path):
    speech = gen_tone_speech(0.5, RATE, seed=21)
    noise = gen_white_noise(speech.size, seed=22)
    speech_path = tmp_path / "speech.wav"
    noise_path = tmp_path / "noise.wav"
    write_wav(speech_path, AudioBuffer(speech, RATE))
    write_wav(noise_path, AudioBuffer(0.5 * noise, RATE))
    noisy_path = tmp_path / "noisy.wav"
    assert main(["mix", str(speech_path), str(noise_path), str(noisy_path), "--snr-db", "0"]) == 0
    return tmp_path, speech_path, noise_path, noisy_path


def read_csv_lines(path):
    lines = path.read_text().splitlines()
    assert lines[0] == "format_version,1"
    return lines[1:]


def test_enhance_outputs_and_manifest(clips, capsys):
    tmp_path, _, _, noisy_path = clips
    out = tmp_path / "out.wav"
    assert main(["enhance", str(noisy_path), str(out), "--method", "gss", "--k", "5",
                 "--seed", "9"]) == 0
    err = capsys.readouterr().err
    assert "iterations=1" in err and "clipped=" in err
    assert out.exists()
    manifest = json.loads((tmp_path / "out.manifest.json").read_text())
    assert manifest["command"] == "enhance"
    assert manifest["config"]["method"] == "gss"
    assert manifest["config"]["k"] == 5
    assert manifest["seed"] == 9
    assert manifest["format_version"] == 1
    assert manifest["inputs"] == [str(noisy_path)]
    assert manifest["outputs"] == [str(out)]


def test_no_command_is_usage_error(capsys):
    assert main([]) == 1
    assert "error:" in capsys.readouterr().err


def test_enhance_config_file_and_flag_precedence(clips):
    tmp_path, _, _, noisy_path = clips
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment line\nmethod = gss\nk = 8\nmax_iters = 4\n")
    out = tmp_path / "cfg_out.wav"
    assert main(["enhance", str(noisy_path), str(out), "--config", str(cfg), "--k", "5"]) == 0
    config = json.loads((tmp_path / "cfg_out.manifest.json").read_text())["config"]
    assert config["method"] == "gss"
    assert config["k"] == 5  # flag wins over the file
    assert config["max_iters"] == 4


def test_enhance_bad_config_key(clips, capsys):
    tmp_path, _, _, noisy_path = clips
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("mystery = 1\n")
    assert main(["enhance", str(noisy_path), str(tmp_path / "x.wav"), "--config", str(cfg)]) == 1
    assert "mystery" in capsys.readouterr().err


def test_enhance_rejects_unknown_method(clips):
    tmp_path, _, _, noisy_path = clips
    assert main(["enhance", str(noisy_path), str(tmp_path / "x.wav"), "--method", "zzz"]) == 1


def test_enhance_missing_input(tmp_path, capsys):
    assert main(["enhance", str(tmp_path / "nope.wav"), str(tmp_path / "x.wav")]) == 1
    assert "error:" in capsys.readouterr().err


def test_enhance_huge_alpha_reproduces_input(clips, capsys):
    tmp_path, _, _, noisy_path = clips
    out = tmp_path / "noop.wav"
    assert main(["enhance", str(noisy_path), str(out), "--alpha", "1e9"]) == 0
    assert "iterations=0" in capsys.readouterr().err
    assert out.read_bytes() == noisy_path.read_bytes()


def test_mix_achieved_snr_echo_and_manifest(clips, capsys):
    tmp_path, speech_path, noise_path, noisy_path = clips
    capsys.readouterr()
    out = tmp_path / "m.wav"
    assert main(["mix", str(speech_path), str(noise_path), str(out), "--snr-db", "5"]) == 0
    stdout = capsys.readouterr().out
    assert "target_snr_db=5" in stdout and "achieved_snr_db=" in stdout
    manifest = json.loads((tmp_path / "m.manifest.json").read_text())
    mixes = manifest["config"]["mixes"]
    assert len(mixes) == 1
    assert mixes[0]["target_snr_db"] == 5.0
    assert mixes[0]["scale"] > 0
    assert abs(mixes[0]["achieved_snr_db"] - 5.0) < 1e-9


def test_mix_grid_writes_one_file_per_point(clips):
    tmp_path, speech_path, noise_path, _ = clips
    out = tmp_path / "grid.wav"
    assert main(["mix", str(speech_path), str(noise_path), str(out),
                 "--snr-db", "-15:5:15"]) == 0
    targets = [-15.0, -10.0, -5.0, 0.0, 5.0, 10.0, 15.0]
    for value in targets:
        assert (tmp_path / f"grid_snr{value:g}dB.wav").exists()
    manifest = json.loads((tmp_path / "grid.manifest.json").read_text())
    assert [m["target_snr_db"] for m in manifest["config"]["mixes"]] == targets


def test_mix_equal_power_inputs_scale_one(tmp_path):
    # same per-sample power means the noise needs no rescaling at 0 dB
    speech = np.tile([0.25, -0.25], 4000)
    noise = np.tile([0.25, 0.25], 4000)
    speech_path = tmp_path / "eq_speech.wav"
    noise_path = tmp_path / "eq_noise.wav"
    write_wav(speech_path, AudioBuffer(speech, RATE))
    write_wav(noise_path, AudioBuffer(noise, RATE))
    out = tmp_path / "eq_mix.wav"
    assert main(["mix", str(speech_path), str(noise_path), str(out), "--snr-db", "0"]) == 0
    manifest = json.loads((tmp_path / "eq_mix.manifest.json").read_text())
    assert manifest["config"]["mixes"][0]["scale"] == 1.0


@pytest.mark.parametrize("spec", ["5:5", "0:-1:10", "10:5:0", "abc"])
def test_mix_rejects_bad_grid(clips, spec):
    tmp_path, speech_path, noise_path, _ = clips
    assert main(["mix", str(speech_path), str(noise_path), str(tmp_path / "g.wav"),
                 "--snr-db", spec]) == 1


def test_mix_rejects_rate_mismatch(clips):
    tmp_path, speech_path, _, _ = clips
    other = tmp_path / "slow.wav"
    write_wav(other, AudioBuffer(gen_white_noise(4000, seed=1), 8000))
    assert main(["mix", str(speech_path), str(other), str(tmp_path / "m2.wav"),
                 "--snr-db", "0"]) == 1


@pytest.fixture()
def corpus(tmp_path, clips):
    _, speech_path, noise_path, _ = clips
    clean = tmp_path / "clean"
    noisy = tmp_path / "noisy"
    clean.mkdir()
    noisy.mkdir()
    for i in range(2):
        clip = gen_tone_speech(0.5, RATE, seed=30 + i)
        write_wav(clean / f"clip{i}.wav", AudioBuffer(clip, RATE))
        assert main(["mix", str(clean / f"clip{i}.wav"), str(noise_path),
                     str(noisy / f"clip{i}.wav"), "--snr-db", "0"]) == 0
        (noisy / f"clip{i}.manifest.json").unlink()
    return clean, noisy


def test_eval_report_and_figure(corpus, tmp_path):
    clean, noisy = corpus
    report = tmp_path / "report.csv"
    assert main(["eval", str(clean), str(noisy), "--report", str(report),
                 "--method", "gss"]) == 0
    lines = read_csv_lines(report)
    assert lines[0] == "clip_id,method,input_snr_db,output_snr_db,iterations"
    rows = [line.split(",") for line in lines[1:]]
    assert [r[0] for r in rows] == ["clip0.wav", "clip1.wav", "mean"]
    for row in rows:
        assert row[1] == "gss"
        assert float(row[3]) > float(row[2])
    for col in (2, 3, 4):
        values = [float(r[col]) for r in rows[:-1]]
        assert float(rows[-1][col]) == float(np.mean(values))
    assert (tmp_path / "report.png").exists()
    assert (tmp_path / "report.manifest.json").exists()


def test_eval_no_figure(corpus, tmp_path):
    clean, noisy = corpus
    report = tmp_path / "nofig.csv"
    assert main(["eval", str(clean), str(noisy), "--report", str(report),
                 "--method", "bss", "--no-figure"]) == 0
    assert not (tmp_path / "nofig.png").exists()


def test_eval_identical_pair_renders_inf(tmp_path):
    clean = tmp_path / "same_clean"
    noisy = tmp_path / "same_noisy"
    clean.mkdir()
    noisy.mkdir()
    clip = gen_tone_speech(0.5, RATE, seed=40)
    write_wav(clean / "x.wav", AudioBuffer(clip, RATE))
    write_wav(noisy / "x.wav", AudioBuffer(clip, RATE))
    report = tmp_path / "inf.csv"
    assert main(["eval", str(clean), str(noisy), "--report", str(report),
                 "--method", "gss", "--no-figure"]) == 0
    row = read_csv_lines(report)[1].split(",")
    assert row[2] == "inf"


def test_eval_ten_clip_corpus_golden(tmp_path):
    clean = tmp_path / "clean10"
    noisy = tmp_path / "noisy10"
    clean.mkdir()
    noisy.mkdir()
    noise_path = tmp_path / "noise_src.wav"
    for i in range(10):
        clip = gen_tone_speech(3.0, RATE, seed=100 + i)
        noise = gen_white_noise(clip.size, seed=200 + i)
        write_wav(clean / f"clip{i:02d}.wav", AudioBuffer(clip, RATE))
        write_wav(noise_path, AudioBuffer(noise / np.max(np.abs(noise)), RATE))
        assert main(["mix", str(clean / f"clip{i:02d}.wav"), str(noise_path),
                     str(noisy / f"clip{i:02d}.wav"), "--snr-db", "0"]) == 0
        (noisy / f"clip{i:02d}.manifest.json").unlink()
    report = tmp_path / "ten.csv"
    assert main(["eval", str(clean), str(noisy), "--report", str(report),
                 "--method", "gss", "--no-figure"]) == 0
    mean = read_csv_lines(report)[-1].split(",")
    assert mean[0] == "mean"
    assert float(mean[2]) == pytest.approx(4.517448747740438e-05, abs=1e-9)
    assert float(mean[3]) == pytest.approx(7.045300935156526, rel=1e-6)


def test_eval_lists_unpaired_and_fails(corpus, tmp_path, capsys):
    clean, noisy = corpus
    write_wav(clean / "extra.wav", AudioBuffer(gen_white_noise(2000, seed=3), RATE))
    assert main(["eval", str(clean), str(noisy), "--report", str(tmp_path / "r.csv")]) == 1
    assert "extra.wav" in capsys.readouterr().err


def test_eval_thread_count_does_not_change_report(corpus, tmp_path, monkeypatch):
    clean, noisy = corpus
    single = tmp_path / "single.csv"
    threaded = tmp_path / "threaded.csv"
    monkeypatch.setenv("GRAPHSUB_THREADS", "1")
    assert main(["eval", str(clean), str(noisy), "--report", str(single),
                 "--method", "igss", "--no-figure"]) == 0
    monkeypatch.setenv("GRAPHSUB_THREADS", "4")
    assert main(["eval", str(clean), str(noisy), "--report", str(threaded),
                 "--method", "igss", "--no-figure"]) == 0
    assert single.read_bytes() == threaded.read_bytes()


def test_spectrum_outputs(clips, tmp_path):
    _, _, noise_path, _ = clips
    out = tmp_path / "spec.csv"
    assert main(["spectrum", str(noise_path), str(out), "--k", "1", "3",
                 "--frame-index", "2"]) == 0
    for k in (1, 3):
        lines = read_csv_lines(tmp_path / f"spec_k{k}.csv")
        assert lines[0] == "bin,eigenvalue_re,eigenvalue_im,magnitude"
        assert len(lines) == 1 + 256
    assert (tmp_path / "spec.png").exists()
    manifest = json.loads((tmp_path / "spec.manifest.json").read_text())
    assert manifest["config"]["k"] == [1, 3]
    assert manifest["config"]["frame_index"] == 2


def test_spectrum_default_k_list(clips, tmp_path):
    _, _, noise_path, _ = clips
    out = tmp_path / "defaults.csv"
    assert main(["spectrum", str(noise_path), str(out), "--no-figure"]) == 0
    for k in (1, 3, 8, 20, 50):
        assert (tmp_path / f"defaults_k{k}.csv").exists()


def test_spectrum_k1_identity_magnitudes(clips, tmp_path):
    tmp_path_, _, noise_path, _ = clips
    from graphsub import read_wav

    out = tmp_path / "ident.csv"
    assert main(["spectrum", str(noise_path), str(out), "--k", "1", "--k1-identity",
                 "--no-figure"]) == 0
    lines = read_csv_lines(tmp_path / "ident_k1.csv")
    samples = read_wav(noise_path).samples
    first = lines[1].split(",")
    assert float(first[3]) == pytest.approx(abs(samples[0]), abs=1e-12)
    assert float(first[1]) == pytest.approx(1.0, abs=1e-12)


def test_spectrum_frame_index_out_of_range(clips, tmp_path):
    _, _, noise_path, _ = clips
    assert main(["spectrum", str(noise_path), str(tmp_path / "s.csv"),
                 "--frame-index", "9999"]) == 1


def test_csv_floats_roundtrip_exactly(corpus, tmp_path):
    clean, noisy = corpus
    report = tmp_path / "exact.csv"
    assert main(["eval", str(clean), str(noisy), "--report", str(report),
                 "--method", "gss", "--no-figure"]) == 0
    from graphsub import read_wav, snr

    row = read_csv_lines(report)[1].split(",")
    clean_buf = read_wav(clean / "clip0.wav")
    noisy_buf = read_wav(noisy / "clip0.wav")
    assert float(row[2]) == snr(clean_buf.samples, noisy_buf.samples)
