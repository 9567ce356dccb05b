import os
import shutil

import pytest

test_save_path = ".pytest_cache"

dummy_save_path = os.path.join(test_save_path, "dummy")
dummy_config_path = os.path.join(dummy_save_path, "dummy.yml")
dummy_matrix_path = os.path.join(dummy_save_path, "dummy.json")


def test_main_init(mocker):
    import phermit.__main__
    import phermit.cli
    _ = mocker.patch.object(phermit.cli, "main", return_value=1337)
    _ = mocker.patch.object(phermit.__main__, "__name__", "__main__")
    mock_exit = mocker.patch.object(phermit.__main__.sys, "exit")
    phermit.__main__.init()
    assert mock_exit.call_args[0][0] == 1337


@pytest.fixture
def dummy_config(request):
    def fin():
        shutil.rmtree(dummy_save_path, ignore_errors=True)
    fin()
    request.addfinalizer(fin)
    os.makedirs(dummy_save_path, exist_ok=True)
    with open(dummy_config_path, "w") as fd:
        fd.write("seed: 5\n")
    open(dummy_matrix_path, "a").close()
    return


def test_main_args(dummy_config, mocker):
    mock_check = mocker.patch("phermit.cli.cmd_check")
    mock_demo = mocker.patch("phermit.cli.cmd_demo")
    mock_wdw = mocker.patch("phermit.cli.cmd_wdw")
    mock_susy = mocker.patch("phermit.cli.cmd_susy")
    mock_evolve = mocker.patch("phermit.cli.cmd_evolve")
    from phermit.cli import main
    assert main([]) == 1
    assert main(["--version"]) == 0
    assert main(["--bad-flag"]) == 1
    assert main(["demo", "unknown"]) == 1
    with pytest.raises(AssertionError):
        main(["-v", "--silent", "check", dummy_matrix_path])
    config = {}

    def config_getter(*args, **kwargs):
        nonlocal config
        return config

    mock_config_load = mocker.patch("phermit.utils.load_config")
    mock_config_load.side_effect = config_getter
    config = {"seed": 5}
    assert main(["--config", dummy_config_path, "check", dummy_matrix_path]) == 0
    run_config = mock_check.call_args[0][0]
    assert run_config.seed == 5 and run_config.command == "check"
    assert mock_check.call_args[0][1:] == (dummy_matrix_path, None)
    assert main(["--config", dummy_config_path, "--seed", "9", "check", dummy_matrix_path, "--eta", "eta.json"]) == 0
    assert mock_check.call_args[0][0].seed == 9 and mock_check.call_args[0][2] == "eta.json"
    assert main(["demo", "wdw", "--kappa", "1", "--alpha", "0.5"]) == 0
    assert mock_demo.call_args[0][1] == "wdw" and mock_demo.call_args[0][0].get("kappa") == 1
    assert main(["wdw", "sweep", "--alpha-range=-1:1:5"]) == 0
    assert mock_wdw.call_args[0][1] == "sweep"
    assert main(["wdw"]) == 0
    assert mock_wdw.call_args[0][1] == "spectrum"
    assert main(["susy", "--xi", "poly:2:1", "--lambda", "0.5"]) == 0
    assert mock_susy.call_args[0][0].get("lam") == 0.5
    assert main(["evolve", dummy_matrix_path, "--eta", "eta.json", "--dt", "0.01"]) == 0
    assert mock_evolve.call_args[0][0].get("dt") == 0.01
    config = {"tol": -1.0}
    assert main(["--config", dummy_config_path, "wdw"]) == 1
    assert mock_config_load.call_count == 3
