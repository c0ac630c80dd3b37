import torch

from surrogate_trainer import UNetConfig, bench_inference, build_unet


class TestBenchInference:
    def test_report_contract(self, torch_single_thread):
        model = build_unet(UNetConfig(input_size=32, filter_ladder=(8, 16, 32)))
        result = bench_inference(model, torch.rand(1, 32, 32), repeats=20)
        assert len(result["timings"]) == 20
        assert result["mean_seconds"] > 0
        assert result["coefficient_of_variation"] >= 0

    def test_minimum_twenty_repeats_enforced(self, torch_single_thread):
        model = build_unet(UNetConfig(input_size=32, filter_ladder=(8, 16, 32)))
        result = bench_inference(model, torch.rand(1, 32, 32), repeats=3)
        assert len(result["timings"]) == 20

    def test_smaller_input_is_not_slower(self, torch_single_thread):
        config = UNetConfig(input_size=128, filter_ladder=(8, 16, 32))
        model = build_unet(config)
        big = bench_inference(model, torch.rand(1, 128, 128), repeats=20)
        small_model = build_unet(UNetConfig(input_size=32, filter_ladder=(8, 16, 32)))
        small = bench_inference(small_model, torch.rand(1, 32, 32), repeats=20)
        assert small["mean_seconds"] <= big["mean_seconds"]
