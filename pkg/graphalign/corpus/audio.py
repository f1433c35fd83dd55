#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Audio segments and manifest ingestion.

A manifest is a UTF-8 text file with one `<audio-path>\\t<transcript>` pair
per line. Relative audio paths are resolved against the manifest directory.

    >>> from graphalign.corpus.audio import load_dataset
    >>> dataset = load_dataset("~/graphalign/graphalign_data/corpus/manifest.tsv")
    >>> dataset[0].transcript
"""

# Built-in modules #
import unicodedata
import warnings
from dataclasses import dataclass
from pathlib import Path

# Third party modules #
import numpy
import soundfile

# Internal modules #
from graphalign.core.errors import DataError

###############################################################################
def normalize_transcript(text):
    """
    NFC normalisation, control characters replaced by spaces and runs of
    whitespace collapsed. Format characters such as the zero width joiner
    are kept since Indic scripts need them.
    """
    text = unicodedata.normalize('NFC', text)
    text = ''.join(' ' if unicodedata.category(c) == 'Cc' else c for c in text)
    return ' '.join(text.split())

###############################################################################
@dataclass(frozen=True, eq=False)
class AudioSegment:
    """
    One utterance: mono floating point samples in [-1, 1], the sample rate
    in Hz, the transcript and an identifier. Noise recordings are segments
    with an empty transcript.
    """

    samples:     numpy.ndarray
    sample_rate: int
    transcript:  str
    id:          str

    def __post_init__(self):
        samples = numpy.asarray(self.samples, dtype=numpy.float64)
        if samples.ndim != 1 or samples.size == 0:
            raise DataError("Audio segment '%s' has no samples." % self.id)
        if int(self.sample_rate) <= 0:
            msg = "Audio segment '%s' has a non positive sample rate %s."
            raise DataError(msg % (self.id, self.sample_rate))
        if any(unicodedata.category(c) == 'Cc' for c in self.transcript):
            msg = "Transcript of '%s' contains control characters."
            raise DataError(msg % self.id)
        object.__setattr__(self, 'samples', samples)
        object.__setattr__(self, 'sample_rate', int(self.sample_rate))

    def __repr__(self):
        return '%s object "%s" (%.2fs)' % (self.__class__, self.id, self.duration)

    def __len__(self): return len(self.samples)

    @property
    def duration(self):
        """Length in seconds."""
        return len(self.samples) / self.sample_rate

    def replace(self, **kwargs):
        """Copy of this segment with some fields changed."""
        fields = dict(samples=self.samples, sample_rate=self.sample_rate,
                      transcript=self.transcript, id=self.id)
        fields.update(kwargs)
        return AudioSegment(**fields)

    def __eq__(self, other):
        if not isinstance(other, AudioSegment): return NotImplemented
        return (self.id == other.id and
                self.transcript == other.transcript and
                self.sample_rate == other.sample_rate and
                numpy.array_equal(self.samples, other.samples))

###############################################################################
def read_wav(path):
    """
    Decode a linear PCM WAV file to mono float samples by averaging the
    channels. Returns the samples and the sample rate.
    """
    path = Path(path)
    if not path.exists():
        raise DataError("The audio file '%s' does not exist." % path)
    try:
        info = soundfile.info(str(path))
    except RuntimeError as error:
        raise DataError("Cannot decode audio file '%s'." % path) from error
    if info.format != 'WAV' or not info.subtype.startswith('PCM'):
        msg = "Unsupported encoding %s/%s in '%s', expected linear PCM WAV."
        raise DataError(msg % (info.format, info.subtype, path))
    data, rate = soundfile.read(str(path), dtype='float64', always_2d=True)
    return data.mean(axis=1), rate

def write_wav(path, samples, sample_rate):
    """Write samples as 16-bit linear PCM."""
    samples = numpy.clip(numpy.asarray(samples, dtype=numpy.float64), -1.0, 1.0)
    soundfile.write(str(path), samples, int(sample_rate), subtype='PCM_16')

###############################################################################
def read_manifest(manifest_path):
    """
    Parse the manifest and return a list of tuples
    `(line_number, audio_path, transcript)`. Blank lines are ignored.
    """
    manifest_path = Path(manifest_path).expanduser()
    if not manifest_path.exists():
        raise DataError("The manifest '%s' does not exist." % manifest_path)
    base_dir = manifest_path.parent
    entries = []
    with open(manifest_path, encoding='utf-8') as handle:
        for num, line in enumerate(handle, start=1):
            line = line.rstrip('\r\n')
            if not line.strip(): continue
            if '\t' not in line:
                msg = "Line %i of '%s' is not an `<audio-path>\\t<transcript>` pair."
                raise DataError(msg % (num, manifest_path))
            audio, transcript = line.split('\t', 1)
            audio = Path(audio).expanduser()
            if not audio.is_absolute(): audio = base_dir / audio
            entries.append((num, audio, transcript))
    return entries

def write_manifest(manifest_path, rows):
    """Write `(audio_path, transcript)` pairs, paths relative when possible."""
    manifest_path = Path(manifest_path)
    manifest_path.parent.mkdir(parents=True, exist_ok=True)
    with open(manifest_path, 'w', encoding='utf-8') as handle:
        for audio, transcript in rows:
            audio = Path(audio)
            try: audio = audio.relative_to(manifest_path.parent)
            except ValueError: pass
            handle.write("%s\t%s\n" % (audio.as_posix(), transcript))

def load_dataset(manifest_path):
    """
    Load every utterance listed in a manifest, in manifest order.
    The identifier of an utterance is the stem of its audio file.
    Utterances with an empty transcript are skipped with a warning.
    """
    dataset, seen = [], {}
    for num, audio, transcript in read_manifest(manifest_path):
        # Missing or undecodable files are fatal #
        if not audio.exists():
            msg = "Line %i of the manifest '%s': audio file '%s' not found."
            raise DataError(msg % (num, manifest_path, audio))
        try:
            samples, rate = read_wav(audio)
        except DataError as error:
            msg = "Line %i of the manifest '%s': %s"
            raise DataError(msg % (num, manifest_path, error)) from error
        # Transcripts #
        transcript = normalize_transcript(transcript)
        if not transcript:
            msg = "Line %i of the manifest '%s' has an empty transcript, skipped."
            warnings.warn(msg % (num, manifest_path))
            continue
        # Identifiers must be unique #
        utt_id = audio.stem
        if utt_id in seen:
            msg = "Line %i of the manifest '%s' repeats the utterance id '%s'" \
                  " already used on line %i."
            raise DataError(msg % (num, manifest_path, utt_id, seen[utt_id]))
        seen[utt_id] = num
        dataset.append(AudioSegment(samples, rate, transcript, utt_id))
    return dataset

def load_noise_bank(directory):
    """All WAV files of a directory, sorted by name, as transcript-free segments."""
    directory = Path(directory).expanduser()
    paths = sorted(directory.glob('*.wav'))
    if not paths:
        raise DataError("No noise recordings found in '%s'." % directory)
    bank = []
    for path in paths:
        samples, rate = read_wav(path)
        bank.append(AudioSegment(samples, rate, '', path.stem))
    return bank
