#include "risia/types.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace risia {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

int NetworkConfig::row_dim() const {
  int m = 0;
  for (int k = 0; k < pairs; ++k) m += rx_antennas[k] * streams[k];
  return m;
}

int NetworkConfig::col_dim() const {
  int n = 0;
  for (int k = 0; k < pairs; ++k) n += tx_antennas[k] * streams[k];
  return n;
}

int NetworkConfig::target_dim() const {
  const int total = total_streams();
  int s = 0;
  for (int i = 0; i < pairs; ++i) s += streams[i] * total;
  return s;
}

int NetworkConfig::total_streams() const {
  return std::accumulate(streams.begin(), streams.end(), 0);
}

int NetworkConfig::row_offset(int i) const {
  int off = 0;
  for (int k = 0; k < i; ++k) off += rx_antennas[k] * streams[k];
  return off;
}

int NetworkConfig::col_offset(int j) const {
  int off = 0;
  for (int k = 0; k < j; ++k) off += tx_antennas[k] * streams[k];
  return off;
}

int NetworkConfig::block_offset(int i, int j) const {
  int off = 0;
  const int total = total_streams();
  for (int k = 0; k < i; ++k) off += streams[k] * total;
  for (int k = 0; k < j; ++k) off += streams[i] * streams[k];
  return off;
}

void NetworkConfig::validate() const {
  require(pairs >= 1, "network.pairs must be >= 1");
  require(ris_elements >= 0, "network.ris_elements must be >= 0");
  const auto k = static_cast<std::size_t>(pairs);
  require(tx_antennas.size() == k, "network.tx_antennas must have K entries");
  require(rx_antennas.size() == k, "network.rx_antennas must have K entries");
  require(streams.size() == k, "network.streams must have K entries");
  for (int i = 0; i < pairs; ++i) {
    require(tx_antennas[i] >= 1, "network.tx_antennas entries must be >= 1");
    require(rx_antennas[i] >= 1, "network.rx_antennas entries must be >= 1");
    require(streams[i] >= 1, "network.streams entries must be >= 1");
    require(streams[i] <= std::min(tx_antennas[i], rx_antennas[i]),
            "network.streams cannot exceed min(tx_antennas, rx_antennas)");
  }
}

NetworkConfig NetworkConfig::symmetric(int pairs, int tx_antennas,
                                       int rx_antennas, int streams,
                                       int ris_elements) {
  NetworkConfig cfg;
  cfg.pairs = pairs;
  cfg.tx_antennas.assign(static_cast<std::size_t>(pairs), tx_antennas);
  cfg.rx_antennas.assign(static_cast<std::size_t>(pairs), rx_antennas);
  cfg.streams.assign(static_cast<std::size_t>(pairs), streams);
  cfg.ris_elements = ris_elements;
  cfg.validate();
  return cfg;
}

void ChannelSet::validate() const {
  net.validate();
  require(noise_power > 0.0, "channels.noise_power must be > 0");
  require(tx_power > 0.0, "channels.tx_power must be > 0");
  const auto k = static_cast<std::size_t>(net.pairs);
  require(direct.size() == k, "channel grid must have K rows");
  for (int i = 0; i < net.pairs; ++i) {
    require(direct[i].size() == k, "channel grid must have K columns");
    for (int j = 0; j < net.pairs; ++j) {
      require(direct[i][j].rows() == net.rx_antennas[i] &&
                  direct[i][j].cols() == net.tx_antennas[j],
              "direct channel H[" + std::to_string(i) + "][" +
                  std::to_string(j) + "] has inconsistent shape");
    }
  }
  if (net.ris_elements == 0) {
    require(ris_rx.empty() && tx_ris.empty(),
            "no-RIS channel set must not carry RIS link matrices");
    return;
  }
  require(ris_rx.size() == k && tx_ris.size() == k,
          "RIS link matrices must have K entries");
  for (int i = 0; i < net.pairs; ++i) {
    require(ris_rx[i].rows() == net.rx_antennas[i] &&
                ris_rx[i].cols() == net.ris_elements,
            "RIS-to-receiver matrix R[" + std::to_string(i) +
                "] has inconsistent shape");
    require(tx_ris[i].rows() == net.ris_elements &&
                tx_ris[i].cols() == net.tx_antennas[i],
            "transmitter-to-RIS matrix T[" + std::to_string(i) +
                "] has inconsistent shape");
  }
}

ChannelSet without_ris(const ChannelSet& ch) {
  ChannelSet out;
  out.net = ch.net;
  out.net.ris_elements = 0;
  out.direct = ch.direct;
  out.noise_power = ch.noise_power;
  out.tx_power = ch.tx_power;
  return out;
}

}  // namespace risia
