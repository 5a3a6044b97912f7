import pytest
import torch
from transformers import BertConfig, BertModel, BertTokenizerFast

VOCAB = [
    "[PAD]",
    "[UNK]",
    "[CLS]",
    "[SEP]",
    "[MASK]",
    "the",
    "cat",
    "cats",
    "sat",
    "on",
    "a",
    "mat",
    "dog",
    "saw",
    "un",
    "##happi",
    "##ness",
    "##s",
    "runs",
    "fast",
]

ACCEPTANCE_LINES = []


def record_criterion(number, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory):
    """A small randomly initialized BERT checkpoint saved to disk."""
    ckpt = tmp_path_factory.mktemp("tiny-bert")
    tokenizer = BertTokenizerFast(vocab={t: i for i, t in enumerate(VOCAB)})
    tokenizer.model_max_length = 24
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=24,
    )
    torch.manual_seed(7)
    model = BertModel(config)
    model.eval()
    model.save_pretrained(ckpt)
    tokenizer.save_pretrained(ckpt)
    return ckpt


@pytest.fixture()
def treebank(tmp_path):
    """A small CoNLL-U file whose forms are all coverable by the test vocab."""
    text = """\
# sent_id = s1
1\tthe\t_\tDET\t_\t_\t2\tdet\t_\t_
2\tcat\t_\tNOUN\t_\t_\t3\tnsubj\t_\t_
3\tsat\t_\tVERB\t_\t_\t0\troot\t_\t_
4\ton\t_\tADP\t_\t_\t6\tcase\t_\t_
5\ta\t_\tDET\t_\t_\t6\tdet\t_\t_
6\tmat\t_\tNOUN\t_\t_\t3\tobl\t_\t_

# sent_id = s2
1\tunhappiness\t_\tNOUN\t_\t_\t2\tnsubj\t_\t_
2\truns\t_\tVERB\t_\t_\t0\troot\t_\t_
3\tfast\t_\tADV\t_\t_\t2\tadvmod\t_\t_

# sent_id = s3
1\tthe\t_\tDET\t_\t_\t2\tdet\t_\t_
2\tdog\t_\tNOUN\t_\t_\t3\tnsubj\t_\t_
3\tsaw\t_\tVERB\t_\t_\t0\troot\t_\t_
4\tcats\t_\tNOUN\t_\t_\t3\tobj\t_\t_
"""
    path = tmp_path / "tiny.conllu"
    path.write_text(text, encoding="utf-8")
    return path
