"""Every CLI invocation shown in the README runs and prints exactly the
recorded output."""

import re
from pathlib import Path

from addcomb.cli import run

README = Path(__file__).resolve().parent.parent / "README.md"

_BLOCK = re.compile(r"```\n\$ addcomb ([^\n]+)\n(.*?)```", re.DOTALL)


def readme_examples():
    text = README.read_text()
    for match in _BLOCK.finditer(text):
        argv = match.group(1).split()
        argv = [a.strip('"') for a in argv]
        yield argv, match.group(2)


def test_readme_cli_examples(capsys):
    examples = list(readme_examples())
    assert len(examples) >= 4
    for argv, expected in examples:
        code = run(argv)
        out = capsys.readouterr().out
        assert code == 0, argv
        assert out == expected, (argv, out, expected)
