/*
 * Copyright 2026 The seldkit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <optional>

#include "seldkit/dsp/features.hpp"
#include "seldkit/io/image.hpp"
#include "seldkit/nn/conformer.hpp"
#include "seldkit/nn/gru.hpp"

namespace seldkit::model {

using ad::Var;
using nn::Ctx;
using nn::ParamVisitor;

enum class Variant { kAudioOnly, kVisualOnly, kAudioVisual };
enum class Fusion { kAvConformer, kCmaf, kCa, kGru };
enum class VisualEncoderKind { kPatchProjection, kSplitPoolCnn };

inline Variant parse_variant(const std::string& s) {
  if (s == "AO" || s == "ao" || s == "audio_only") return Variant::kAudioOnly;
  if (s == "VO" || s == "vo" || s == "visual_only") return Variant::kVisualOnly;
  if (s == "AV" || s == "av" || s == "audio_visual") return Variant::kAudioVisual;
  throw ConfigError("model: unknown variant '" + s + "'");
}

inline Fusion parse_fusion(const std::string& s) {
  if (s == "av_conformer") return Fusion::kAvConformer;
  if (s == "cmaf") return Fusion::kCmaf;
  if (s == "ca") return Fusion::kCa;
  if (s == "gru") return Fusion::kGru;
  throw ConfigError("model: unknown fusion '" + s + "'");
}

inline VisualEncoderKind parse_visual_encoder(const std::string& s) {
  if (s == "patch_projection") return VisualEncoderKind::kPatchProjection;
  if (s == "split_pool_cnn") return VisualEncoderKind::kSplitPoolCnn;
  throw ConfigError("model: unknown visual_encoder '" + s + "'");
}

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::kAudioOnly: return "AO";
    case Variant::kVisualOnly: return "VO";
    default: return "AV";
  }
}

inline const char* to_string(Fusion f) {
  switch (f) {
    case Fusion::kAvConformer: return "av_conformer";
    case Fusion::kCmaf: return "cmaf";
    case Fusion::kCa: return "ca";
    default: return "gru";
  }
}

struct ModelConfig {
  Variant variant = Variant::kAudioVisual;
  Fusion fusion = Fusion::kAvConformer;
  VisualEncoderKind visual_encoder = VisualEncoderKind::kPatchProjection;
  int64_t embed_dim = 512;
  int fusion_layers = 4;
  int encoder_layers = 4;  // conformer depth inside each encoder
  int heads = 8;
  int tracks = 3;
  int classes = 13;
  int conv_blocks = 4;  // audio CNN blocks; each halves time and frequency
  int conformer_kernel = 51;
  int64_t head_hidden = 512;
  double dropout = 0.05;
  int frame_height = 224;  // per-half squares; full frame is H x 2H
  int temporal_stride = 1;  // split_pool_cnn temporal pooling factor

  void validate() const {
    if (embed_dim % heads != 0)
      throw ConfigError("model: embed_dim must be divisible by heads");
    if (embed_dim < (int64_t(1) << (conv_blocks - 1)))
      throw ConfigError("model: embed_dim too small for the conv block progression");
    if (frame_height % 16 != 0)
      throw ConfigError("model: frame_height must be divisible by 16");
    if (temporal_stride < 1) throw ConfigError("model: temporal_stride must be >= 1");
  }

  int pool_factor() const { return 1 << conv_blocks; }
  // channel progression ending at embed_dim, halving backwards per block
  int64_t block_channels(int block) const {
    return embed_dim >> (conv_blocks - 1 - block);
  }
};

// One residual audio CNN block: two 3x3 convolutions, 2x2 average pooling,
// batch norm, ReLU, with a pooled 1x1 shortcut.
template <typename T>
class AudioConvBlock {
 public:
  AudioConvBlock() = default;
  AudioConvBlock(int64_t in_ch, int64_t out_ch, Rng& rng)
      : conv1(in_ch, out_ch, 3, 1, 1, rng),
        conv2(out_ch, out_ch, 3, 1, 1, rng),
        shortcut(in_ch, out_ch, 1, 1, 0, rng),
        bn(out_ch) {}

  Var<T> forward(const Var<T>& x, const Ctx& ctx) const {
    Var<T> h = ad::relu(conv1.forward(x));
    h = conv2.forward(h);
    h = ad::avg_pool2d(h, 2);
    h = bn.forward(h, ctx);
    const Var<T> s = ad::avg_pool2d(shortcut.forward(x), 2);
    return ad::relu(ad::add(h, s));
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    conv1.visit_params(prefix + ".conv1", fn);
    conv2.visit_params(prefix + ".conv2", fn);
    shortcut.visit_params(prefix + ".shortcut", fn);
    bn.visit_params(prefix + ".bn", fn);
  }

  nn::Conv2d<T> conv1, conv2, shortcut;
  nn::BatchNorm2d<T> bn;
};

// CNN-Conformer audio encoder: residual conv blocks halve time and frequency
// per block, frequency average pooling collapses the spectral axis, and a
// conformer stack refines the [T/2^B x D] embedding.
template <typename T>
class AudioEncoder {
 public:
  AudioEncoder() = default;
  AudioEncoder(const ModelConfig& cfg, Rng& rng) : cfg_(cfg) {
    int64_t in_ch = dsp::kFeatureChannels;
    for (int b = 0; b < cfg.conv_blocks; ++b) {
      blocks.emplace_back(in_ch, cfg.block_channels(b), rng);
      in_ch = cfg.block_channels(b);
    }
    conformer = nn::ConformerStack<T>(cfg.embed_dim, cfg.encoder_layers, cfg.heads,
                                      cfg.conformer_kernel, cfg.dropout, rng);
  }

  // CNN + frequency pooling only; exposed for the shape-law and zero-input
  // checks.
  Var<T> cnn_embedding(const Var<T>& features, const Ctx& ctx) const {
    if (features.ndim() != 3 || features.dim(0) != dsp::kFeatureChannels)
      throw ShapeError("audio_encoder: want [7 x T x F], got " +
                       shape_str(features.shape()));
    const int pf = cfg_.pool_factor();
    if (features.dim(1) % pf != 0 || features.dim(2) % pf != 0)
      throw ShapeError("audio_encoder: T and F must be divisible by " +
                       std::to_string(pf));
    Var<T> h = features;
    for (const auto& b : blocks) h = b.forward(h, ctx);
    return ad::freq_mean(h);  // [T/pf x D]
  }

  Var<T> forward(const Var<T>& features, const Ctx& ctx) const {
    return conformer.forward(cnn_embedding(features, ctx), ctx);
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    for (size_t b = 0; b < blocks.size(); ++b)
      blocks[b].visit_params(prefix + ".block" + std::to_string(b), fn);
    conformer.visit_params(prefix + ".conformer", fn);
  }

  std::vector<AudioConvBlock<T>> blocks;
  nn::ConformerStack<T> conformer;

 private:
  ModelConfig cfg_;
};

// Trainable stand-in for the pretrained frame encoders. Frames are split into
// left/right squares, each half is reduced to a vector (16x16 average-pooled
// patches with a linear projection, or a small conv stack with global
// pooling), the halves are concatenated through a linear layer to embed_dim,
// and a conformer stack runs over the frame sequence.
template <typename T>
class VisualEmbedder {
 public:
  VisualEmbedder() = default;
  VisualEmbedder(const ModelConfig& cfg, Rng& rng) : cfg_(cfg) {
    const int64_t hp = cfg.frame_height / 16;
    if (cfg.visual_encoder == VisualEncoderKind::kPatchProjection) {
      half_width_ = cfg.embed_dim;
      patch_proj = nn::Linear<T>(3 * hp * hp, cfg.embed_dim, rng);
    } else {
      half_width_ = 64;
      c1 = nn::Conv2d<T>(3, 16, 3, 1, 1, rng);
      c2 = nn::Conv2d<T>(16, 32, 3, 1, 1, rng);
      c3 = nn::Conv2d<T>(32, 64, 3, 1, 1, rng);
    }
    merge = nn::Linear<T>(2 * half_width_, cfg.embed_dim, rng);
    conformer = nn::ConformerStack<T>(cfg.embed_dim, cfg.encoder_layers, cfg.heads,
                                      cfg.conformer_kernel, cfg.dropout, rng);
  }

  // One square half [3 x H x H] -> [1 x half_width].
  Var<T> project_half(const Array<T>& half_chw) const {
    const Var<T> x = Var<T>::constant(half_chw);
    if (cfg_.visual_encoder == VisualEncoderKind::kPatchProjection) {
      const Var<T> patches = ad::avg_pool2d(x, 16);
      return patch_proj.forward(ad::reshape(patches, Shape{1, patches.size()}));
    }
    Var<T> h = ad::avg_pool2d(ad::relu(c1.forward(x)), 4);
    h = ad::avg_pool2d(ad::relu(c2.forward(h)), 4);
    h = ad::relu(c3.forward(h));
    return ad::reshape(ad::global_avg_pool(h), Shape{1, 64});
  }

  // frames: one [3 x H x 2H] tensor per label frame, values in [0, 1].
  Var<T> forward(const std::vector<Array<T>>& frames, const Ctx& ctx) const {
    if (frames.empty()) throw InputError("visual_embedder: no frames");
    const int H = cfg_.frame_height;
    std::vector<Var<T>> rows;
    rows.reserve(frames.size());
    for (const Array<T>& f : frames) {
      if (f.ndim() != 3 || f.dim(0) != 3 || f.dim(1) != H || f.dim(2) != 2 * H)
        throw InputError("visual_embedder: want [3 x " + std::to_string(H) + " x " +
                         std::to_string(2 * H) + "] frames, got " + shape_str(f.shape()));
      const Var<T> left = project_half(split_half(f, 0));
      const Var<T> right = project_half(split_half(f, 1));
      rows.push_back(merge.forward(ad::concat_cols(left, right)));
    }
    Var<T> seq = ad::concat_rows(rows);
    if (cfg_.visual_encoder == VisualEncoderKind::kSplitPoolCnn &&
        cfg_.temporal_stride > 1)
      seq = temporal_pool_interp(seq, cfg_.temporal_stride);
    return conformer.forward(seq, ctx);
  }

  static Array<T> split_half(const Array<T>& frame, int side) {
    const int64_t H = frame.dim(1), W = frame.dim(2);
    Array<T> half(Shape{3, H, H});
    const int64_t off = side == 0 ? 0 : W - H;
    for (int64_t c = 0; c < 3; ++c)
      for (int64_t r = 0; r < H; ++r)
        for (int64_t u = 0; u < H; ++u) half.at(c, r, u) = frame.at(c, r, off + u);
    return half;
  }

  // Average adjacent frame vectors, then reconstruct the label rate by linear
  // interpolation between pooled steps (the stand-in for temporally
  // downsampling video encoders).
  static Var<T> temporal_pool_interp(const Var<T>& seq, int stride) {
    const int64_t Tn = seq.dim(0);
    const int64_t pooled = (Tn + stride - 1) / stride;
    std::vector<Var<T>> down;
    down.reserve(static_cast<size_t>(pooled));
    for (int64_t i = 0; i < pooled; ++i) {
      const int64_t r0 = i * stride, r1 = std::min(Tn, r0 + stride);
      Var<T> acc = ad::slice_rows(seq, r0, r0 + 1);
      for (int64_t r = r0 + 1; r < r1; ++r)
        acc = ad::add(acc, ad::slice_rows(seq, r, r + 1));
      down.push_back(ad::scale(acc, T(1) / static_cast<T>(r1 - r0)));
    }
    std::vector<Var<T>> up;
    up.reserve(static_cast<size_t>(Tn));
    for (int64_t t = 0; t < Tn; ++t) {
      const double pos = (static_cast<double>(t) + 0.5) / stride - 0.5;
      const int64_t lo = std::clamp<int64_t>(static_cast<int64_t>(std::floor(pos)), 0,
                                             pooled - 1);
      const int64_t hi = std::min(pooled - 1, lo + 1);
      const double w = std::clamp(pos - static_cast<double>(lo), 0.0, 1.0);
      if (lo == hi || w == 0.0) {
        up.push_back(down[static_cast<size_t>(lo)]);
      } else {
        up.push_back(ad::add(ad::scale(down[static_cast<size_t>(lo)], static_cast<T>(1 - w)),
                             ad::scale(down[static_cast<size_t>(hi)], static_cast<T>(w))));
      }
    }
    return ad::concat_rows(up);
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    if (cfg_.visual_encoder == VisualEncoderKind::kPatchProjection) {
      patch_proj.visit_params(prefix + ".patch_proj", fn);
    } else {
      c1.visit_params(prefix + ".c1", fn);
      c2.visit_params(prefix + ".c2", fn);
      c3.visit_params(prefix + ".c3", fn);
    }
    merge.visit_params(prefix + ".merge", fn);
    conformer.visit_params(prefix + ".conformer", fn);
  }

  nn::Linear<T> patch_proj;
  nn::Conv2d<T> c1, c2, c3;
  nn::Linear<T> merge;
  nn::ConformerStack<T> conformer;

 private:
  ModelConfig cfg_;
  int64_t half_width_ = 0;
};

// One CMAF block for modalities (alpha, beta): the input is added to the
// outputs of parallel MHSA (on alpha) and MHCA (queries from alpha, keys and
// values from beta), followed by a feed-forward with residual. Pre-norm
// placement. The CA variant drops the MHSA branch.
template <typename T>
class CmafBlock {
 public:
  CmafBlock() = default;
  CmafBlock(int64_t dim, int heads, double dropout, bool with_self, Rng& rng)
      : with_self_(with_self),
        self_norm(dim),
        self_attn(dim, heads, rng),
        cross_norm_q(dim),
        cross_norm_kv(dim),
        cross_attn(dim, heads, rng),
        ffn_norm(dim),
        ffn_in(dim, 4 * dim, rng),
        ffn_out(4 * dim, dim, rng),
        dropout_(dropout) {}

  Var<T> forward(const Var<T>& alpha, const Var<T>& beta, const Ctx& ctx) const {
    Var<T> h = ad::add(alpha, apply_dropout(cross_attn.forward(cross_norm_q.forward(alpha),
                                                               cross_norm_kv.forward(beta)),
                                            dropout_, ctx));
    if (with_self_)
      h = ad::add(h, apply_dropout(self_attn.forward(self_norm.forward(alpha)), dropout_, ctx));
    const Var<T> ff = ffn_out.forward(ad::swish(ffn_in.forward(ffn_norm.forward(h))));
    return ad::add(h, apply_dropout(ff, dropout_, ctx));
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    if (with_self_) {
      self_norm.visit_params(prefix + ".self_norm", fn);
      self_attn.visit_params(prefix + ".self_attn", fn);
    }
    cross_norm_q.visit_params(prefix + ".cross_norm_q", fn);
    cross_norm_kv.visit_params(prefix + ".cross_norm_kv", fn);
    cross_attn.visit_params(prefix + ".cross_attn", fn);
    ffn_norm.visit_params(prefix + ".ffn_norm", fn);
    ffn_in.visit_params(prefix + ".ffn_in", fn);
    ffn_out.visit_params(prefix + ".ffn_out", fn);
  }

  bool with_self_ = true;
  nn::LayerNorm<T> self_norm;
  nn::MHSA<T> self_attn;
  nn::LayerNorm<T> cross_norm_q, cross_norm_kv;
  nn::MHCA<T> cross_attn;
  nn::LayerNorm<T> ffn_norm;
  nn::Linear<T> ffn_in, ffn_out;

 private:
  double dropout_ = 0.0;
};

template <typename T>
struct CmafLayer {
  CmafBlock<T> audio_block;
  CmafBlock<T> visual_block;
};

// Attention-based fusion of the two [T x D] embeddings into [T x 2D].
template <typename T>
class FusionModule {
 public:
  FusionModule() = default;
  FusionModule(const ModelConfig& cfg, Rng& rng) : kind_(cfg.fusion) {
    const int64_t d = cfg.embed_dim;
    switch (kind_) {
      case Fusion::kAvConformer:
        av_conformer = nn::ConformerStack<T>(2 * d, cfg.fusion_layers, cfg.heads,
                                             cfg.conformer_kernel, cfg.dropout, rng);
        break;
      case Fusion::kCmaf:
      case Fusion::kCa:
        for (int l = 0; l < cfg.fusion_layers; ++l)
          cmaf_layers.push_back(
              {CmafBlock<T>(d, cfg.heads, cfg.dropout, kind_ == Fusion::kCmaf, rng),
               CmafBlock<T>(d, cfg.heads, cfg.dropout, kind_ == Fusion::kCmaf, rng)});
        break;
      case Fusion::kGru:
        gru = nn::BiGRU<T>(2 * d, d, 2, rng);
        break;
    }
  }

  Var<T> forward(const Var<T>& audio, const Var<T>& visual, const Ctx& ctx) const {
    if (audio.dim(0) != visual.dim(0))
      throw ShapeError("fuse: audio and visual sequence lengths differ: " +
                       shape_str(audio.shape()) + " vs " + shape_str(visual.shape()));
    switch (kind_) {
      case Fusion::kAvConformer:
        return av_conformer.forward(ad::concat_cols(audio, visual), ctx);
      case Fusion::kCmaf:
      case Fusion::kCa: {
        Var<T> a = audio, v = visual;
        for (const auto& layer : cmaf_layers) {
          const Var<T> a2 = layer.audio_block.forward(a, v, ctx);
          const Var<T> v2 = layer.visual_block.forward(v, a, ctx);
          a = a2;
          v = v2;
        }
        return ad::concat_cols(a, v);
      }
      case Fusion::kGru:
      default:
        return gru.forward(ad::concat_cols(audio, visual));
    }
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    switch (kind_) {
      case Fusion::kAvConformer:
        av_conformer.visit_params(prefix + ".av_conformer", fn);
        break;
      case Fusion::kCmaf:
      case Fusion::kCa:
        for (size_t l = 0; l < cmaf_layers.size(); ++l) {
          cmaf_layers[l].audio_block.visit_params(prefix + ".l" + std::to_string(l) + ".audio",
                                                  fn);
          cmaf_layers[l].visual_block.visit_params(
              prefix + ".l" + std::to_string(l) + ".visual", fn);
        }
        break;
      case Fusion::kGru:
        gru.visit_params(prefix + ".gru", fn);
        break;
    }
  }

  nn::ConformerStack<T> av_conformer;
  std::vector<CmafLayer<T>> cmaf_layers;
  nn::BiGRU<T> gru;

 private:
  Fusion kind_ = Fusion::kAvConformer;
};

// m-ACCDOA head: two fully-connected layers, tanh-bounded output reshaped to
// [T x N x C x 3].
template <typename T>
class AccdoaHead {
 public:
  AccdoaHead() = default;
  AccdoaHead(int64_t in_dim, const ModelConfig& cfg, Rng& rng)
      : fc1(in_dim, cfg.head_hidden, rng),
        fc2(cfg.head_hidden, static_cast<int64_t>(cfg.tracks) * cfg.classes * 3, rng),
        tracks_(cfg.tracks),
        classes_(cfg.classes) {}

  Var<T> forward(const Var<T>& fused) const {
    const Var<T> h = ad::tanh_op(fc2.forward(ad::relu(fc1.forward(fused))));
    return ad::reshape(h, Shape{fused.dim(0), tracks_, classes_, 3});
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    fc1.visit_params(prefix + ".fc1", fn);
    fc2.visit_params(prefix + ".fc2", fn);
  }

  nn::Linear<T> fc1, fc2;

 private:
  int64_t tracks_ = 3, classes_ = 13;
};

// The AO / VO / AV model family. AO and VO append an extra conformer stack to
// match the AV methods' depth; AV routes both embeddings through the
// configured fusion.
template <typename T>
class SeldModel {
 public:
  explicit SeldModel(const ModelConfig& cfg, uint64_t seed = 0) : cfg_(cfg) {
    cfg_.validate();
    Rng rng(seed);
    if (cfg_.variant != Variant::kVisualOnly) audio = AudioEncoder<T>(cfg_, rng);
    if (cfg_.variant != Variant::kAudioOnly) visual = VisualEmbedder<T>(cfg_, rng);
    if (cfg_.variant == Variant::kAudioVisual) {
      fusion = FusionModule<T>(cfg_, rng);
      head = AccdoaHead<T>(2 * cfg_.embed_dim, cfg_, rng);
    } else {
      depth_match = nn::ConformerStack<T>(cfg_.embed_dim, cfg_.fusion_layers, cfg_.heads,
                                          cfg_.conformer_kernel, cfg_.dropout, rng);
      head = AccdoaHead<T>(cfg_.embed_dim, cfg_, rng);
    }
  }

  const ModelConfig& config() const { return cfg_; }

  // features: [7 x T_in x F]; frames: one [3 x H x 2H] per label frame.
  Var<T> forward(const std::optional<Array<T>>& features,
                 const std::vector<Array<T>>& frames, const Ctx& ctx) const {
    switch (cfg_.variant) {
      case Variant::kAudioOnly: {
        if (!features) throw ConfigError("AO model: missing audio features");
        const Var<T> emb = audio.forward(Var<T>::constant(*features), ctx);
        return head.forward(depth_match.forward(emb, ctx));
      }
      case Variant::kVisualOnly: {
        if (frames.empty()) throw ConfigError("VO model: missing video frames");
        const Var<T> emb = visual.forward(frames, ctx);
        return head.forward(depth_match.forward(emb, ctx));
      }
      case Variant::kAudioVisual:
      default: {
        if (!features) throw ConfigError("AV model: missing audio features");
        if (frames.empty()) throw ConfigError("AV model: missing video frames");
        const Var<T> a = audio.forward(Var<T>::constant(*features), ctx);
        const Var<T> v = visual.forward(frames, ctx);
        return head.forward(fusion.forward(a, v, ctx));
      }
    }
  }

  // Batched inference: items evaluated independently, the leading batch
  // dimension carried through to [B x T x N x C x 3].
  Array<T> predict_batch(const std::vector<std::optional<Array<T>>>& features,
                         const std::vector<std::vector<Array<T>>>& frames, Ctx ctx) const {
    if (features.size() != frames.size())
      throw ShapeError("predict_batch: feature/frame batch sizes differ");
    Array<T> out;
    const int64_t B = static_cast<int64_t>(features.size());
    for (int64_t b = 0; b < B; ++b) {
      const Var<T> y = forward(features[static_cast<size_t>(b)],
                               frames[static_cast<size_t>(b)], ctx);
      if (b == 0) {
        Shape s = y.shape();
        s.insert(s.begin(), B);
        out = Array<T>(s);
      }
      std::copy(y.value().data(), y.value().data() + y.size(),
                out.data() + b * y.size());
    }
    return out;
  }

  void visit_params(const std::string& prefix, const ParamVisitor<T>& fn) {
    if (cfg_.variant != Variant::kVisualOnly)
      audio.visit_params(prefix + ".audio_encoder", fn);
    if (cfg_.variant != Variant::kAudioOnly)
      visual.visit_params(prefix + ".visual_embedder", fn);
    if (cfg_.variant == Variant::kAudioVisual) {
      fusion.visit_params(prefix + ".fusion", fn);
    } else {
      depth_match.visit_params(prefix + ".depth_match", fn);
    }
    head.visit_params(prefix + ".head", fn);
  }

  AudioEncoder<T> audio;
  VisualEmbedder<T> visual;
  FusionModule<T> fusion;
  nn::ConformerStack<T> depth_match;
  AccdoaHead<T> head;

 private:
  ModelConfig cfg_;
};

// Image -> [3 x H x W] tensor with values in [0, 1].
template <typename T>
Array<T> image_to_chw(const io::Image& img) {
  Array<T> out(Shape{3, img.height, img.width});
  for (int v = 0; v < img.height; ++v)
    for (int u = 0; u < img.width; ++u) {
      const uint8_t* px = img.pixel(v, u);
      for (int c = 0; c < 3; ++c)
        out.at(c, v, u) = static_cast<T>(px[c] / 255.0);
    }
  return out;
}

}  // namespace seldkit::model
