from trackstitch.config import PipelineConfig
from trackstitch.mot_io import SequenceMeta
from trackstitch.pipeline import refine_detections
from trackstitch.scoring import ConstraintKind
from trackstitch.synth import CorruptionConfig, ScenarioConfig, corrupt, generate

META = SequenceMeta(fps=30, img_width=1920, img_height=1080, num_frames=200)


def fragmented_sequence():
    gt, meta = generate(ScenarioConfig(num_objects=6, num_frames=200, seed=17))
    corrupted, log = corrupt(gt, CorruptionConfig(random_cuts_per_track=2, gap_frames=(1, 2), seed=18))
    return gt, corrupted, log, meta


def test_empty_input_gives_empty_output():
    out, summary = refine_detections([], META)
    assert out == []
    assert summary.tracklets_in == 0 and summary.trajectories_out == 0
    assert summary.detections_in == 0


def test_association_merges_fragments():
    gt, corrupted, log, meta = fragmented_sequence()
    cfg = PipelineConfig()
    cfg.cutter_enabled = False
    out, summary = refine_detections(corrupted, meta, cfg)
    ids_in = {d.track_id for d in corrupted}
    ids_out = {d.track_id for d in out}
    assert len(ids_out) < len(ids_in)
    assert summary.tracklets_in == len(ids_in)
    assert summary.trajectories_out == len(ids_out)
    assert summary.links > 0


def test_interpolation_gated_by_flag():
    gt, corrupted, log, meta = fragmented_sequence()
    cfg = PipelineConfig()
    cfg.cutter_enabled = False
    cfg.interp_enabled = False
    out, summary = refine_detections(corrupted, meta, cfg)
    assert summary.detections_interpolated == 0
    assert len(out) == len(corrupted)

    cfg.interp_enabled = True
    out2, summary2 = refine_detections(corrupted, meta, cfg)
    assert summary2.detections_interpolated > 0
    assert len(out2) == len(corrupted) + summary2.detections_interpolated


def test_all_stop_config_reproduces_input_tracklets():
    # a tiny t50 with a t0 just above it filters every real candidate
    gt, corrupted, log, meta = fragmented_sequence()
    cfg = PipelineConfig()
    cfg.cutter_enabled = False
    cfg.interp_enabled = False
    td = cfg.scores.params[ConstraintKind.TIME_DISTANCE]
    td.t50 = 1e-9
    td.t0 = 2e-9
    out, summary = refine_detections(corrupted, meta, cfg)
    assert summary.links == 0
    assert summary.trajectories_out == summary.tracklets_in

    def partition(dets):
        groups = {}
        for d in dets:
            groups.setdefault(d.track_id, []).append((d.frame, d.x, d.y))
        return sorted(sorted(g) for g in groups.values())

    assert partition(out) == partition(corrupted)


def test_detection_content_preserved_modulo_ids_and_interp():
    gt, corrupted, log, meta = fragmented_sequence()
    cfg = PipelineConfig()
    cfg.interp_enabled = False
    out, _ = refine_detections(corrupted, meta, cfg)
    key = lambda d: (d.frame, d.x, d.y, d.w, d.h)
    assert sorted(map(key, out)) == sorted(map(key, corrupted))


def test_output_sorted_by_frame_then_id():
    gt, corrupted, log, meta = fragmented_sequence()
    out, _ = refine_detections(corrupted, meta, PipelineConfig())
    keys = [(d.frame, d.track_id) for d in out]
    assert keys == sorted(keys)


def test_candidate_dump_is_tsv(tmp_path):
    import io

    gt, corrupted, log, meta = fragmented_sequence()
    buffer = io.StringIO()
    refine_detections(corrupted, meta, PipelineConfig(), candidate_dump=buffer)
    lines = buffer.getvalue().splitlines()
    header = lines[0].split("\t")
    assert header[:2] == ["predecessor", "candidate"]
    assert header[-2:] == ["product", "marginal"]
    assert any(line.split("\t")[1] == "STOP" for line in lines[1:])
