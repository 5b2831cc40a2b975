"""Causal-LM author: fine-tune on a training export, sample with nucleus p.

Two model sources:

- ``"tiny"`` builds a from-scratch minimal transformer with a whitespace
  tokenizer derived from the training file - the smoke configuration that CI
  exercises end to end;
- any other value is treated as a local HuggingFace model name/path and
  loaded through ``transformers`` (full-size setup, not exercised by tests).

Training follows the fixed recipe of the config (default 3 epochs, learning
rate 2e-5, 1024-token batches); an optional argumentation corpus adds one
prior epoch in the same pair format. Generation truncates at the first
complete pair grammar or at ``max_tokens``.
"""

from __future__ import annotations

from pathlib import Path
from typing import List, Optional

from .config import AdapterConfig
from .grammar import first_complete_pair


class ModelLoadError(Exception):
    """The configured model or training file could not be loaded."""


class WhitespaceTokenizer:
    """Reversible whitespace vocabulary for the tiny model."""

    PAD = 0
    UNK = 1

    def __init__(self, texts: List[str]):
        words = sorted({w for text in texts for w in text.split()})
        self.id_to_word = ["<pad>", "<unk>", *words]
        self.word_to_id = {w: i for i, w in enumerate(self.id_to_word)}

    def __len__(self) -> int:
        return len(self.id_to_word)

    def encode(self, text: str) -> List[int]:
        return [self.word_to_id.get(w, self.UNK) for w in text.split()]

    def decode(self, ids: List[int]) -> str:
        return " ".join(self.id_to_word[i] for i in ids if i != self.PAD)


def _build_tiny_model(vocab_size: int, config: AdapterConfig):
    import torch
    from torch import nn

    class TinyCausalLM(nn.Module):
        def __init__(self):
            super().__init__()
            self.tokens = nn.Embedding(vocab_size, config.tiny_dim)
            self.positions = nn.Embedding(config.tiny_context, config.tiny_dim)
            layer = nn.TransformerEncoderLayer(
                d_model=config.tiny_dim,
                nhead=config.tiny_heads,
                dim_feedforward=4 * config.tiny_dim,
                batch_first=True,
                dropout=0.0,
            )
            self.blocks = nn.TransformerEncoder(layer, num_layers=config.tiny_layers)
            self.head = nn.Linear(config.tiny_dim, vocab_size)

        def forward(self, ids):
            seq_len = ids.shape[1]
            pos = torch.arange(seq_len, device=ids.device).unsqueeze(0)
            x = self.tokens(ids) + self.positions(pos)
            mask = torch.triu(
                torch.full((seq_len, seq_len), float("-inf"), device=ids.device), 1
            )
            return self.head(self.blocks(x, mask=mask))

    return TinyCausalLM()


class ModelAuthor:
    """Author backed by a trained causal language model."""

    def __init__(self, config: AdapterConfig):
        self.config = config
        if config.training_export is None:
            raise ModelLoadError("training_export is required for model mode")
        path = Path(config.training_export)
        if not path.exists():
            raise ModelLoadError(f"training export not found: {path}")
        self._train_lines = [
            line for line in path.read_text(encoding="utf-8").splitlines() if line
        ]
        if not self._train_lines:
            raise ModelLoadError(f"training export is empty: {path}")
        self._argument_lines: List[str] = []
        if config.argument_corpus:
            arg_path = Path(config.argument_corpus)
            if not arg_path.exists():
                raise ModelLoadError(f"argument corpus not found: {arg_path}")
            self._argument_lines = [
                line for line in arg_path.read_text(encoding="utf-8").splitlines() if line
            ]
        if config.model == "tiny":
            self._init_tiny()
        else:
            self._init_pretrained()

    # ------------------------------------------------------------- tiny

    def _init_tiny(self) -> None:
        try:
            import torch
        except ImportError as exc:
            raise ModelLoadError(f"torch unavailable: {exc}") from exc
        torch.manual_seed(self.config.seed)
        self.tokenizer = WhitespaceTokenizer(self._train_lines + self._argument_lines)
        self.model = _build_tiny_model(len(self.tokenizer), self.config)
        self.model.to(self.config.device)
        self._end_cn_id = self.tokenizer.word_to_id.get("<|endofcn|>")
        if self._argument_lines:
            # argumentation pre-finetune: one prior epoch, same format
            self._train(self._argument_lines, epochs=1)
        self._train(self._train_lines, epochs=self.config.epochs)
        self._generator = torch.Generator(device=self.config.device)
        self._generator.manual_seed(self.config.seed)

    def _train(self, lines: List[str], epochs: int) -> None:
        import torch
        from torch import nn

        stream: List[int] = []
        for line in lines:
            stream.extend(self.tokenizer.encode(line))
        context = self.config.tiny_context
        blocks = [
            stream[i : i + context + 1]
            for i in range(0, max(len(stream) - 1, 1), context)
        ]
        blocks = [b for b in blocks if len(b) >= 2]
        if not blocks:
            raise ModelLoadError("training stream too short")
        per_step = max(1, self.config.batch_tokens // context)
        optimizer = torch.optim.AdamW(self.model.parameters(), lr=self.config.learning_rate)
        loss_fn = nn.CrossEntropyLoss(ignore_index=WhitespaceTokenizer.PAD)
        self.model.train()
        for _ in range(epochs):
            for start in range(0, len(blocks), per_step):
                batch = blocks[start : start + per_step]
                width = max(len(b) for b in batch)
                padded = torch.full(
                    (len(batch), width), WhitespaceTokenizer.PAD, dtype=torch.long
                )
                for row, block in enumerate(batch):
                    padded[row, : len(block)] = torch.tensor(block, dtype=torch.long)
                padded = padded.to(self.config.device)
                logits = self.model(padded[:, :-1])
                loss = loss_fn(
                    logits.reshape(-1, logits.shape[-1]), padded[:, 1:].reshape(-1)
                )
                optimizer.zero_grad()
                loss.backward()
                optimizer.step()
        self.model.eval()

    # ------------------------------------------------------- pretrained

    def _init_pretrained(self) -> None:
        try:
            import torch  # noqa: F401
            from transformers import AutoModelForCausalLM, AutoTokenizer
        except ImportError as exc:
            raise ModelLoadError(f"transformers/torch unavailable: {exc}") from exc
        try:
            self.hf_tokenizer = AutoTokenizer.from_pretrained(self.config.model)
            self.hf_model = AutoModelForCausalLM.from_pretrained(self.config.model)
        except Exception as exc:
            raise ModelLoadError(f"cannot load model {self.config.model!r}: {exc}") from exc
        self.hf_model.to(self.config.device)
        # full fine-tune of a named model is an offline job; serving assumes
        # the checkpoint at `model` is already fine-tuned on the export
        self.tokenizer = None
        self.model = None

    # ------------------------------------------------------- generation

    def _sample_tiny(self, condition: str, max_tokens: int) -> str:
        import torch

        ids = self.tokenizer.encode(condition)
        if not ids:
            ids = [WhitespaceTokenizer.UNK]
        generated: List[int] = []
        context = self.config.tiny_context
        with torch.no_grad():
            for _ in range(max_tokens):
                window = (ids + generated)[-context:]
                inp = torch.tensor([window], dtype=torch.long, device=self.config.device)
                logits = self.model(inp)[0, -1]
                next_id = self._nucleus_sample(logits)
                generated.append(next_id)
                if next_id == self._end_cn_id:
                    break
        return self.tokenizer.decode(ids + generated)

    def _nucleus_sample(self, logits) -> int:
        import torch

        probs = torch.softmax(logits, dim=-1)
        sorted_probs, sorted_ids = torch.sort(probs, descending=True)
        cumulative = torch.cumsum(sorted_probs, dim=-1)
        keep = cumulative <= self.config.nucleus_p
        keep[0] = True  # always keep the most probable token
        kept_probs = sorted_probs[keep]
        kept_ids = sorted_ids[keep]
        choice = torch.multinomial(kept_probs, 1, generator=self._generator)
        return int(kept_ids[choice])

    def _sample_pretrained(self, condition: str, max_tokens: int) -> str:
        import torch

        inputs = self.hf_tokenizer(condition, return_tensors="pt").to(self.config.device)
        with torch.no_grad():
            output = self.hf_model.generate(
                **inputs,
                do_sample=True,
                top_p=self.config.nucleus_p,
                max_new_tokens=max_tokens,
                pad_token_id=self.hf_tokenizer.eos_token_id,
            )
        return self.hf_tokenizer.decode(output[0], skip_special_tokens=False)

    def generate(
        self, condition: str, n_chunks: int = 1, max_tokens: Optional[int] = None
    ) -> List[str]:
        """Chunks starting with the exact condition byte string, truncated at
        the first complete pair grammar or ``max_tokens``."""
        budget = max_tokens if max_tokens is not None else self.config.max_tokens
        chunks = []
        for _ in range(n_chunks):
            if self.config.model == "tiny":
                text = self._sample_tiny(condition, budget)
            else:
                text = self._sample_pretrained(condition, budget)
            chunks.append(first_complete_pair(text))
        return chunks
