#include "mcsim/scenario/simulation.hpp"

#include "mcsim/ca/cc_manager.hpp"
#include "mcsim/dc/x2_link.hpp"
#include "mcsim/mac/scheduler.hpp"
#include "mcsim/rlc/pdcp.hpp"
#include "mcsim/rlc/rlc_entity.hpp"
#include "mcsim/rlc/rlc_receiver.hpp"
#include "mcsim/scenario/mobility.hpp"
#include "mcsim/sim/engine.hpp"
#include "mcsim/sim/errors.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <numbers>
#include <sstream>

namespace mcsim::scenario {

namespace {

constexpr int kUeId = 1;
constexpr int kBearerId = 1;

struct Slot
{
  channel::CarrierConfig cfg;
  std::unique_ptr<channel::CarrierChannel> ch;
  std::unique_ptr<mac::CarrierScheduler> sched;
  sim::RngStream harqRng;
};

struct Cell
{
  CellConfig cfg;
  std::vector<Slot> slots;
  ca::CarrierSet set;
  double subframe_s = 0.0;
  std::uint64_t tick = 0;
  int blockedWindows = 0;
};

struct LegEntity
{
  int instance;
  int cell_id;
  rlc::RlcEntity rlc;
};

struct TbRecord
{
  int instance;
  int cell_id;
  int cc_id;
  std::vector<rlc::RlcPdu> pdus;
};

struct PendingSdu
{
  std::uint32_t bytes;
  double arrival;
};

std::string
Node (int cellId, int anchorId)
{
  return cellId == anchorId ? "anchor" : "cell" + std::to_string (cellId);
}

std::string
Db (double v)
{
  char buf[32];
  std::snprintf (buf, sizeof buf, "%.2f", v);
  return buf;
}

} // namespace

struct Simulation::Impl
{
  const ScenarioConfig cfg;
  const std::uint64_t seed;
  TraceSet traces;
  sim::EventEngine engine;
  RunStats stats;
  bool ran = false;

  std::map<int, Cell> cells;
  int anchorId = -1; // LTE cell id when DC is on
  std::vector<int> mmCellIds;
  ca::CarrierReconfigurator reconfigurator;

  MobilityState mobility;
  sim::RngStream mobilityRng;

  rlc::SplitBearer bearer;
  std::deque<PendingSdu> pdcpQueue;
  std::uint64_t pdcpQueueBytes = 0;
  std::uint64_t x2InflightBytes = 0;
  std::optional<double> reorderTimerAt;
  std::uint64_t reorderGen = 0;

  int nextInstance = 1;
  std::unique_ptr<LegEntity> lte;
  std::unique_ptr<LegEntity> mm;       // serving (or stopped source during a handover)
  std::unique_ptr<LegEntity> hoTarget; // target entity while a handover runs
  bool mmServing = false;
  std::map<int, rlc::RlcReceiver> receivers; // per entity instance, UE side

  std::map<std::uint64_t, TbRecord> tbs;
  std::uint64_t nextHandle = 1;

  std::map<std::pair<int, int>, dc::X2Link> x2;
  std::optional<dc::MeasurementFilter> filter;
  dc::DcState dcState;
  std::uint64_t hoGen = 0;
  double hoTriggerTime = 0.0;

  // In-run metrics, accumulated from the same values that go to the traces.
  std::uint64_t deliveredBytes = 0;
  std::map<std::string, std::uint64_t> macAcked;
  std::optional<std::int64_t> fallbackSinceUs;
  std::int64_t fallbackUs = 0;

  Impl (const ScenarioConfig& c, std::uint64_t s, TraceSet t)
    : cfg (c),
      seed (s),
      traces (t),
      reconfigurator (0.010),
      mobilityRng ("mobility/ue" + std::to_string (kUeId), s),
      bearer (kBearerId, c.dc.routing_policy, c.dc.split_weight, c.dc.pdcp_reordering_s)
  {
    Build ();
  }

  // ---------------------------------------------------------------- build

  void Build ()
  {
    auto violations = validate (cfg);
    if (!violations.empty ())
      {
        throw ConfigError (violations);
      }
    PlaceUe ();
    for (const auto& cc : cfg.cells)
      {
        Cell cell;
        cell.cfg = cc;
        const auto carriers = cfg.carriers_of (cc.rat);
        double totalBw = 0.0;
        int primary = carriers.front ().cc_id;
        for (const auto& k : carriers)
          {
            totalBw += k.bandwidth_mhz;
            if (k.is_primary)
              {
                primary = k.cc_id;
              }
          }
        cell.set = ca::CarrierSet (carriers, primary);
        cell.subframe_s = carriers.front ().subframe_duration_s ();
        for (const auto& k : carriers)
          {
            channel::ChannelParams p;
            // Constant power spectral density across the cell's carriers.
            p.tx_power_dbm = cc.tx_power_dbm + 10.0 * std::log10 (k.bandwidth_mhz / totalBw);
            p.noise_figure_db = cfg.channel.noise_figure_db;
            p.shadowing_sigma_los_db = cfg.channel.shadowing_sigma_los_db;
            p.shadowing_sigma_nlos_db = cfg.channel.shadowing_sigma_nlos_db;
            p.los_mode = cfg.channel.los_mode;
            p.fading = cfg.channel.fading;
            p.fading_period_s = cfg.channel.fading_period_s;
            p.blockage_dynamics = cfg.channel.blockage.dynamics;
            p.blockage_attenuation_db = cfg.channel.blockage.attenuation_db;
            if (cc.rat == channel::Rat::Mmwave)
              {
                auto it = cfg.channel.blockage.per_cc.find (k.cc_id);
                p.blockage_enabled = it != cfg.channel.blockage.per_cc.end () && it->second;
              }
            Slot slot{k,
                      std::make_unique<channel::CarrierChannel> (k, p, Geometry (cell.cfg), cc.cell_id, kUeId, seed),
                      std::make_unique<mac::CarrierScheduler> (k, cfg.harq),
                      sim::RngStream ("harq/cell" + std::to_string (cc.cell_id) + "/cc" + std::to_string (k.cc_id),
                                      seed)};
            if (cfg.channel.blockage.mode == BlockageMode::Scripted)
              {
                slot.ch->set_blockage_override (false);
              }
            cell.slots.push_back (std::move (slot));
          }
        if (cc.rat == channel::Rat::Lte)
          {
            anchorId = cc.cell_id;
          }
        else
          {
            mmCellIds.push_back (cc.cell_id);
          }
        cells.emplace (cc.cell_id, std::move (cell));
      }
    reconfigurator.attach (kUeId, cells.at (mmCellIds.front ()).set);

    if (cfg.dc.enabled)
      {
        for (int a : mmCellIds)
          {
            x2.emplace (std::make_pair (anchorId, a), dc::X2Link (cfg.dc.x2_latency_s, cfg.dc.x2_datarate_bps));
            x2.emplace (std::make_pair (a, anchorId), dc::X2Link (cfg.dc.x2_latency_s, cfg.dc.x2_datarate_bps));
            for (int b : mmCellIds)
              {
                if (a != b)
                  {
                    x2.emplace (std::make_pair (a, b), dc::X2Link (cfg.dc.x2_latency_s, cfg.dc.x2_datarate_bps));
                  }
              }
          }
        filter.emplace (kUeId, cfg.dc.ema_alpha);
        dcState.ue_id = kUeId;
        dcState.anchor_cell = anchorId;
        lte = NewEntity (anchorId, rlc::Leg::Lte);
      }
    else
      {
        mm = NewEntity (mmCellIds.front (), rlc::Leg::Mmwave);
        mmServing = true;
      }
  }

  void PlaceUe ()
  {
    const auto& ue = cfg.ue;
    mobility.speed_mps = ue.mobility == MobilityModel::RandomWalk ? ue.speed_mps : 0.0;
    mobility.epoch_s = ue.epoch_s;
    mobility.bound_radius_m = ue.bound_radius_m;
    if (ue.position_m)
      {
        mobility.x_m = ue.position_m->first;
        mobility.y_m = ue.position_m->second;
        return;
      }
    double d = ue.distance_m;
    double angle = ue.angle_deg * std::numbers::pi / 180.0;
    if (ue.placement == Placement::Uniform)
      {
        sim::RngStream place ("placement/ue" + std::to_string (kUeId), seed);
        d = place.uniform (ue.min_distance_m, ue.d_max_m);
        angle = place.uniform (-std::numbers::pi, std::numbers::pi);
      }
    mobility.x_m = d * std::cos (angle);
    mobility.y_m = d * std::sin (angle);
  }

  channel::LinkGeometry Geometry (const CellConfig& c) const
  {
    channel::LinkGeometry g;
    // Distances below the minimum are clamped (near field is not modeled).
    g.distance_2d_m = std::max (cfg.ue.min_distance_m, std::hypot (mobility.x_m - c.x_m, mobility.y_m - c.y_m));
    g.bs_antenna_elements = c.antenna_elements;
    g.ue_antenna_elements = c.rat == channel::Rat::Mmwave ? cfg.ue.antenna_elements : 1;
    return g;
  }

  std::unique_ptr<LegEntity> NewEntity (int cellId, rlc::Leg leg)
  {
    const int inst = nextInstance++;
    receivers[inst];
    return std::make_unique<LegEntity> (LegEntity{inst, cellId, rlc::RlcEntity (cfg.rlc_mode, kUeId, kBearerId, leg)});
  }

  // ---------------------------------------------------------------- traces

  void Rlc (const char* leg, int cc, const char* event, std::uint64_t sn, std::uint64_t bytes)
  {
    if (traces.rlc && cfg.trace.rlc)
      {
        write_row (*traces.rlc, RlcRow{to_us (engine.now ()), leg, cc, kBearerId, event, sn, bytes});
      }
  }

  static const char* LegName (rlc::Leg leg) { return leg == rlc::Leg::Lte ? "LTE" : "MMWAVE"; }

  void Dc (const char* event, const std::string& detail)
  {
    if (traces.dc && cfg.trace.dc)
      {
        write_row (*traces.dc, DcRow{to_us (engine.now ()), kUeId, event, detail});
      }
  }

  void Ctrl (const char* message, const std::string& from, const std::string& to, const char* path, int cc)
  {
    if (traces.ctrl && cfg.trace.ctrl)
      {
        write_row (*traces.ctrl, CtrlRow{to_us (engine.now ()), message, from, to, path, cc});
      }
  }

  void ChannelRows (const Cell& cell)
  {
    if (!(traces.channel && cfg.trace.channel))
      {
        return;
      }
    for (const auto& s : cell.slots)
      {
        write_row (*traces.channel, ChannelRow{to_us (engine.now ()), s.cfg.cc_id, kUeId, s.ch->state ().pathloss_db,
                                               s.ch->state ().blockage.active ? 1 : 0, s.ch->wideband_sinr_db (),
                                               cell.cfg.cell_id});
      }
  }

  // ---------------------------------------------------------------- entities

  LegEntity* ServingEntity (int cellId)
  {
    if (lte && cellId == anchorId)
      {
        return lte.get ();
      }
    if (mm && mmServing && mm->cell_id == cellId)
      {
        return mm.get ();
      }
    return nullptr;
  }

  LegEntity* EntityByInstance (int inst)
  {
    for (LegEntity* e : {lte.get (), mm.get (), hoTarget.get ()})
      {
        if (e && e->instance == inst)
          {
            return e;
          }
      }
    return nullptr;
  }

  void FlushHarq (int cellId)
  {
    for (auto& s : cells.at (cellId).slots)
      {
        if (!s.sched->has_harq (kUeId))
          {
            continue;
          }
        for (auto h : s.sched->harq (kUeId).flush ())
          {
            tbs.erase (h);
          }
      }
  }

  // ---------------------------------------------------------------- PDCP tx

  bool FallbackPolicy () const { return cfg.dc.routing_policy == rlc::RoutingPolicy::MmwaveWithFallback; }

  void NewSdu (std::uint32_t bytes)
  {
    ++stats.sdus_generated;
    pdcpQueue.push_back (PendingSdu{bytes, engine.now ()});
    pdcpQueueBytes += bytes;
    FlushPdcp ();
  }

  void FlushPdcp ()
  {
    rlc::LegStatus legs;
    legs.lte_available = lte != nullptr;
    legs.mmwave_available = mm && mmServing;
    legs.mmwave_outage = cfg.dc.enabled && dcState.mode == dc::DcMode::LteFallback;
    while (!pdcpQueue.empty ())
      {
        auto leg = bearer.route (legs);
        if (!leg)
          {
            break;
          }
        const PendingSdu sdu = pdcpQueue.front ();
        pdcpQueue.pop_front ();
        pdcpQueueBytes -= sdu.bytes;
        const rlc::PdcpPdu pdu = bearer.assign_sn (sdu.bytes, sdu.arrival);
        ++stats.sns_assigned;
        if (*leg == rlc::Leg::Lte)
          {
            Enqueue (*lte, pdu);
          }
        else
          {
            SendTo (mm->cell_id, pdu, cfg.dc.enabled ? anchorId : mm->cell_id);
          }
      }
  }

  void Enqueue (LegEntity& e, const rlc::PdcpPdu& pdu)
  {
    e.rlc.enqueue (pdu);
    Rlc (LegName (e.rlc.leg ()), -1, "enq", pdu.sn, pdu.payload_bytes);
  }

  /// Carries an already numbered PDU from node `from` towards the RLC at cell
  /// `to`, over X2 when the two differ.
  void SendTo (int to, const rlc::PdcpPdu& pdu, int from)
  {
    if (to == from)
      {
        Arrive (to, pdu);
        return;
      }
    const double at = x2.at ({from, to}).x2_deliver (pdu.payload_bytes, engine.now ());
    ++stats.x2_pdus;
    x2InflightBytes += pdu.payload_bytes;
    engine.schedule_at (at, "x2-arrival", [this, to, pdu] {
      x2InflightBytes -= pdu.payload_bytes;
      Arrive (to, pdu);
    });
  }

  /// Where data for the mmWave side goes right now.
  LegEntity* MmDestination ()
  {
    if (hoTarget)
      {
        return hoTarget.get ();
      }
    return mm.get ();
  }

  void Arrive (int cellId, const rlc::PdcpPdu& pdu)
  {
    if (cellId == anchorId && lte)
      {
        // Under the fallback policy the LTE leg carries data only in fallback.
        if (!FallbackPolicy () || dcState.mode == dc::DcMode::LteFallback || !MmDestination ())
          {
            Enqueue (*lte, pdu);
          }
        else
          {
            SendTo (MmDestination ()->cell_id, pdu, anchorId);
          }
        return;
      }
    LegEntity* dest = cfg.dc.enabled && dcState.mode == dc::DcMode::LteFallback ? nullptr : MmDestination ();
    if (dest && dest->cell_id == cellId)
      {
        Enqueue (*dest, pdu);
        return;
      }
    if (dest)
      {
        SendTo (dest->cell_id, pdu, cellId);
      }
    else
      {
        SendTo (anchorId, pdu, cellId);
      }
  }

  // ---------------------------------------------------------------- PDCP rx

  void PdcpReceive (const rlc::PdcpPdu& pdu)
  {
    auto r = bearer.receive (pdu, engine.now ());
    if (r.duplicate)
      {
        ++stats.pdcp_duplicates;
      }
    Release (r);
    ArmReorderTimer ();
  }

  void Release (const rlc::ReorderResult& r)
  {
    for (auto sn : r.lost_sns)
      {
        ++stats.pdcp_timer_losses;
        Rlc ("PDCP", -1, "loss", sn, 0);
      }
    for (const auto& d : r.delivered)
      {
        ++stats.sdus_delivered;
        deliveredBytes += d.payload_bytes;
        Rlc ("PDCP", -1, "deliver", d.sn, d.payload_bytes);
      }
  }

  void ArmReorderTimer ()
  {
    const auto deadline = bearer.reorder_deadline ();
    if (deadline == reorderTimerAt)
      {
        return;
      }
    reorderTimerAt = deadline;
    const std::uint64_t gen = ++reorderGen;
    if (!deadline)
      {
        return;
      }
    engine.schedule_at (std::max (*deadline, engine.now ()), "pdcp-reorder", [this, gen] {
      if (gen != reorderGen)
        {
          return;
        }
      reorderTimerAt.reset ();
      Release (bearer.on_reorder_timeout (engine.now ()));
      ArmReorderTimer ();
    });
  }

  // ---------------------------------------------------------------- MAC

  void TopUp ()
  {
    if (cfg.traffic.kind != TrafficKind::FullBuffer || cfg.rlc_mode == rlc::RlcMode::Sm)
      {
        return;
      }
    auto backlog = [this] {
      std::uint64_t b = pdcpQueueBytes + x2InflightBytes;
      for (LegEntity* e : {lte.get (), mm.get (), hoTarget.get ()})
        {
          if (e)
            {
              b += e->rlc.generate_bsr ().tx_queue_bytes;
            }
        }
      return b;
    };
    std::uint64_t b = backlog ();
    while (b < cfg.traffic.backlog_bytes)
      {
        NewSdu (cfg.traffic.packet_bytes);
        b += cfg.traffic.packet_bytes;
      }
  }

  void Tick (int cellId)
  {
    TopUp ();
    Cell& cell = cells.at (cellId);
    LegEntity* entity = ServingEntity (cellId);
    ca::BufferStatusReport bsr;
    bsr.ue_id = kUeId;
    bsr.bearer_id = kBearerId;
    if (entity)
      {
        bsr = entity->rlc.generate_bsr ();
      }
    const ca::CarrierSet& set =
      cell.cfg.rat == channel::Rat::Mmwave ? reconfigurator.active_set (kUeId, engine.now ()) : cell.set;
    const auto policy = set.size () == 1 ? ca::CcManagerPolicy::NoOp : cfg.cc_manager;
    const ca::BsrSplit split = ca::split_bsr (policy, bsr, set);
    if (entity)
      {
        Ctrl ("BSR", "ue" + std::to_string (kUeId), Node (cellId, anchorId), "air",
              ca::route_control (ca::ControlMessage::Bsr, set));
      }

    for (auto& slot : cell.slots)
      {
        std::vector<mac::FlowDemand> demand;
        auto part = split.find (slot.cfg.cc_id);
        if (entity && part != split.end () && part->second.total () > 0)
          {
            demand.push_back (mac::FlowDemand{kUeId, kBearerId, part->second.total ()});
          }
        const std::map<int, double> sinr{{kUeId, slot.ch->wideband_sinr_db ()}};
        for (const mac::Dci& dci : slot.sched->schedule_subframe (demand, sinr))
          {
            auto& harq = slot.sched->harq (dci.ue_id);
            std::uint64_t handle = 0;
            if (dci.is_retx)
              {
                harq.retransmit (dci.harq_pid);
                handle = harq.process (dci.harq_pid).tb_handle;
              }
            else
              {
                auto pdus = entity->rlc.tx_opportunity (dci.tb_size_bytes);
                if (pdus.empty ())
                  {
                    continue;
                  }
                handle = nextHandle++;
                harq.start (dci, handle);
                for (const auto& p : pdus)
                  {
                    Rlc (LegName (entity->rlc.leg ()), slot.cfg.cc_id, "tx", p.sn, p.length);
                  }
                tbs.emplace (handle, TbRecord{entity->instance, cellId, slot.cfg.cc_id, std::move (pdus)});
              }
            const int attempt = harq.process (dci.harq_pid).attempts;
            const mac::TbOutcome outcome = mac::transport_outcome (dci, slot.ch->effective_sinr_db (), slot.harqRng);
            const std::string rat = channel::to_string (cell.cfg.rat);
            auto& acked = macAcked[mac_metric_key (rat, slot.cfg.cc_id)];
            if (outcome == mac::TbOutcome::Ack)
              {
                acked += dci.tb_size_bytes;
              }
            if (traces.mac && cfg.trace.mac)
              {
                write_row (*traces.mac, MacRow{to_us (engine.now ()), slot.cfg.cc_id, dci.ue_id, dci.mcs,
                                               dci.tb_size_bytes, attempt,
                                               outcome == mac::TbOutcome::Ack ? "ACK" : "NACK", cellId, rat});
              }
            const double delay = cfg.harq.feedback_delay_subframes * cell.subframe_s;
            const int cc = slot.cfg.cc_id;
            const int pid = dci.harq_pid;
            engine.schedule (delay, "harq-feedback",
                             [this, handle, cellId, cc, pid, outcome] { Feedback (handle, cellId, cc, pid, outcome); });
          }
      }

    ++cell.tick;
    const double next = static_cast<double> (cell.tick) * cell.subframe_s;
    if (next < cfg.duration_s)
      {
        engine.schedule_at (next, "subframe", [this, cellId] { Tick (cellId); });
      }
  }

  Slot& SlotOf (int cellId, int cc)
  {
    for (auto& s : cells.at (cellId).slots)
      {
        if (s.cfg.cc_id == cc)
          {
            return s;
          }
      }
    throw std::logic_error ("unknown carrier");
  }

  void Feedback (std::uint64_t handle, int cellId, int cc, int pid, mac::TbOutcome outcome)
  {
    auto it = tbs.find (handle);
    if (it == tbs.end ())
      {
        return; // flushed by a handover or leg switch
      }
    Slot& slot = SlotOf (cellId, cc);
    Ctrl ("HARQ_FEEDBACK", "ue" + std::to_string (kUeId), Node (cellId, anchorId), "air",
          ca::route_control (ca::ControlMessage::HarqFeedback, cells.at (cellId).set));
    const auto result = slot.sched->harq (kUeId).on_feedback (pid, outcome);
    if (result == mac::FeedbackResult::Retransmit)
      {
        return;
      }
    TbRecord rec = std::move (it->second);
    tbs.erase (it);
    LegEntity* e = EntityByInstance (rec.instance);
    if (!e)
      {
        return;
      }
    const char* leg = LegName (e->rlc.leg ());
    auto& rx = receivers[rec.instance];
    for (const auto& p : rec.pdus)
      {
        const auto effect = e->rlc.on_mac_outcome (p.pdu_id, result == mac::FeedbackResult::Delivered);
        if (result == mac::FeedbackResult::Delivered)
          {
            Rlc (leg, cc, "ack", p.sn, p.length);
            if (p.fabricated)
              {
                rx.receive (p);
                deliveredBytes += p.length;
                Rlc (leg, cc, "deliver", 0, p.length);
              }
            else if (auto sdu = rx.receive (p))
              {
                PdcpReceive (*sdu);
              }
          }
        else if (effect.lost_sn)
          {
            ++stats.rlc_losses;
            Rlc (leg, cc, "loss", *effect.lost_sn, p.sdu_bytes);
          }
      }
  }

  // ---------------------------------------------------------------- channel

  void ChannelUpdate (std::uint64_t k)
  {
    const double dt = cfg.channel.update_period_s;
    if (mobility.speed_mps > 0.0)
      {
        mobility = walk_step (mobility, dt, mobilityRng);
      }
    for (auto& [id, cell] : cells)
      {
        const auto g = Geometry (cell.cfg);
        for (auto& s : cell.slots)
          {
            s.ch->update (engine.now (), dt, g);
          }
        ChannelRows (cell);
      }
    const double next = static_cast<double> (k + 1) * dt;
    if (next < cfg.duration_s)
      {
        engine.schedule_at (next, "channel-update", [this, k] { ChannelUpdate (k + 1); });
      }
  }

  void SetWindowBlockage (int cellFilter, bool start)
  {
    for (auto& [id, cell] : cells)
      {
        if (cell.cfg.rat != channel::Rat::Mmwave || (cellFilter >= 0 && cellFilter != id))
          {
            continue;
          }
        cell.blockedWindows += start ? 1 : -1;
        for (auto& s : cell.slots)
          {
            s.ch->set_blockage_override (cell.blockedWindows > 0);
          }
      }
  }

  // ---------------------------------------------------------------- DC

  double PrimarySinr (int cellId)
  {
    const Cell& cell = cells.at (cellId);
    for (const auto& s : cell.slots)
      {
        if (s.cfg.cc_id == cell.set.primary_cc_id ())
          {
            return s.ch->wideband_sinr_db ();
          }
      }
    return cell.slots.front ().ch->wideband_sinr_db ();
  }

  void Measure (std::uint64_t k)
  {
    for (int c : mmCellIds)
      {
        filter->add_sample (c, PrimarySinr (c));
      }
    const auto report = filter->report (engine.now ());
    std::string detail;
    for (const auto& [cell, sinr] : report.sinr_db)
      {
        detail += (detail.empty () ? "" : ";") + ("cell" + std::to_string (cell) + "=" + Db (sinr));
      }
    // Reports ride the LTE control path to the anchor.
    Ctrl ("MEASUREMENT_REPORT", "ue" + std::to_string (kUeId), "anchor", "air",
          ca::route_control (ca::ControlMessage::MeasurementReport, cells.at (anchorId).set));
    Dc ("MEAS", detail);

    if (k == 0)
      {
        const int first = dc::select_secondary (report, dc::kNoCell, cfg.dc.thresholds);
        if (first == dc::kNoCell)
          {
            EnterFallback ("initial: all cells below " + Db (cfg.dc.thresholds.outage_threshold_db) + " dB");
          }
        else
          {
            Recover (first, "initial");
          }
      }
    else
      {
        const dc::DcState before = dcState;
        const auto t = dc::detect_outage_and_fallback (dcState, report, cfg.dc.thresholds);
        if (t == dc::FallbackTransition::EnterFallback)
          {
            dcState = before;
            EnterFallback ("all cells below " + Db (cfg.dc.thresholds.outage_threshold_db) + " dB");
          }
        else if (t == dc::FallbackTransition::Recover)
          {
            const int best = dcState.secondary_cell;
            dcState = before;
            Recover (best, "cell" + std::to_string (best) + "=" + Db (report.sinr_db.at (best)));
          }
        else if (cfg.dc.auto_handover && dcState.mode == dc::DcMode::MmwaveActive &&
                 !dcState.handover_in_progress)
          {
            const int sel = dc::select_secondary (report, dcState.secondary_cell, cfg.dc.thresholds);
            if (sel != dc::kNoCell && sel != dcState.secondary_cell)
              {
                TriggerHandover (sel);
              }
          }
      }

    const double next = static_cast<double> (k + 1) * cfg.dc.measurement_period_s;
    if (next < cfg.duration_s)
      {
        engine.schedule_at (next, "measurement", [this, k] { Measure (k + 1); });
      }
  }

  /// Moves every SDU of a leg that is being switched off to another node.
  void DrainTo (std::unique_ptr<LegEntity>& e, int toCell)
  {
    if (!e)
      {
        return;
      }
    FlushHarq (e->cell_id);
    const int from = e->cell_id;
    const char* leg = LegName (e->rlc.leg ());
    for (const auto& sdu : e->rlc.drain_all ())
      {
        ++stats.forwarded_sdus;
        Rlc (leg, -1, "fwd", sdu.sn, sdu.payload_bytes);
        SendTo (toCell, sdu, from);
      }
    e.reset ();
  }

  void EnterFallback (const std::string& why)
  {
    dcState.mode = dc::DcMode::LteFallback;
    dcState.secondary_cell = dc::kNoCell;
    dcState.handover_in_progress = false;
    ++hoGen; // cancels pending handover steps
    mmServing = false;
    ++stats.fallbacks;
    fallbackSinceUs = to_us (engine.now ());
    Dc ("FALLBACK", why);
    DrainTo (hoTarget, anchorId);
    DrainTo (mm, anchorId);
    FlushPdcp ();
  }

  void Recover (int cell, const std::string& why)
  {
    dcState.mode = dc::DcMode::MmwaveActive;
    dcState.secondary_cell = cell;
    mm = NewEntity (cell, rlc::Leg::Mmwave);
    mmServing = true;
    if (fallbackSinceUs)
      {
        fallbackUs += to_us (engine.now ()) - *fallbackSinceUs;
        fallbackSinceUs.reset ();
        ++stats.recoveries;
        Dc ("RECOVERY", why);
      }
    if (FallbackPolicy () && lte)
      {
        // Symmetric to the fallback: the LTE leg hands its queue to mmWave.
        FlushHarq (anchorId);
        const auto sdus = lte->rlc.drain_all ();
        for (const auto& sdu : sdus)
          {
            ++stats.forwarded_sdus;
            Rlc ("LTE", -1, "fwd", sdu.sn, sdu.payload_bytes);
            SendTo (cell, sdu, anchorId);
          }
      }
    FlushPdcp ();
  }

  bool TriggerHandover (int target)
  {
    if (dcState.mode != dc::DcMode::MmwaveActive || dcState.handover_in_progress ||
        target == dcState.secondary_cell || !mm)
      {
        ++stats.handovers_rejected;
        return false;
      }
    dc::begin_handover (dcState, target);
    ++stats.handovers_triggered;
    hoTriggerTime = engine.now ();
    const int source = mm->cell_id;
    mmServing = false; // data to the old cell stops now
    FlushHarq (source);
    hoTarget = NewEntity (target, rlc::Leg::Mmwave);
    Dc ("HO_TRIGGER", "source=cell" + std::to_string (source) + ";target=cell" + std::to_string (target));
    Ctrl ("SGNB_CHANGE_REQUEST", "anchor", Node (target, anchorId), "x2", -1);
    const auto timing = dc::handover_timing (engine.now (), cfg.dc.x2_latency_s, cfg.dc.rrc_delay_s);
    const std::uint64_t gen = ++hoGen;
    engine.schedule_at (cfg.dc.x2_latency_s + engine.now (), "ho-ack", [this, gen, target] {
      if (gen == hoGen)
        {
          Ctrl ("SGNB_CHANGE_ACK", Node (target, anchorId), "anchor", "x2", -1);
        }
    });
    engine.schedule_at (timing.execution_time, "ho-execute", [this, gen, source, target] {
      if (gen == hoGen)
        {
          ExecuteHandover (source, target);
        }
    });
    engine.schedule_at (timing.completion_time, "ho-complete", [this, gen, target] {
      if (gen == hoGen)
        {
          CompleteHandover (target);
        }
    });
    return true;
  }

  void ExecuteHandover (int source, int target)
  {
    Ctrl ("SGNB_RELEASE_REQUEST", "anchor", Node (source, anchorId), "x2", -1);
    const auto report = filter->report (engine.now ());
    if (report.sinr_db.at (target) < cfg.dc.thresholds.outage_threshold_db)
      {
        ++stats.handovers_aborted;
        EnterFallback ("handover to cell" + std::to_string (target) + " aborted: target in outage");
        return;
      }
    const auto mode = cfg.effective_forward_mode ();
    const auto result = mm->rlc.handover_forward (mode);
    for (const auto& sdu : result.forwarded)
      {
        ++stats.forwarded_sdus;
        Rlc ("MMWAVE", -1, "fwd", sdu.sn, sdu.payload_bytes);
        SendTo (target, sdu, source);
      }
    for (auto sn : result.lost_sns)
      {
        ++stats.forward_losses;
        Rlc ("MMWAVE", -1, "loss", sn, 0);
      }
    Ctrl ("SN_STATUS_TRANSFER", Node (source, anchorId), Node (target, anchorId), "x2", -1);
    Ctrl ("RRC_RECONFIGURATION", "anchor", "ue" + std::to_string (kUeId), "air",
          ca::route_control (ca::ControlMessage::RrcReconfiguration, cells.at (anchorId).set));
    mm.reset ();
  }

  void CompleteHandover (int target)
  {
    Ctrl ("SGNB_RECONFIGURATION_COMPLETE", "anchor", Node (target, anchorId), "x2", -1);
    mm = std::move (hoTarget);
    dcState.secondary_cell = target;
    dcState.handover_in_progress = false;
    mmServing = true;
    ++stats.handovers_done;
    Dc ("HO_DONE", "cell" + std::to_string (target) + ";interruption_ms=" + Db ((engine.now () - hoTriggerTime) * 1e3));
    FlushPdcp ();
  }

  // ---------------------------------------------------------------- run

  RunMetrics Run ()
  {
    if (ran)
      {
        throw std::logic_error ("Simulation::run called twice");
      }
    ran = true;
    if (traces.mac && cfg.trace.mac)
      {
        *traces.mac << kMacHeader << '\n';
      }
    if (traces.rlc && cfg.trace.rlc)
      {
        *traces.rlc << kRlcHeader << '\n';
      }
    if (traces.dc && cfg.trace.dc)
      {
        *traces.dc << kDcHeader << '\n';
      }
    if (traces.channel && cfg.trace.channel)
      {
        *traces.channel << kChannelHeader << '\n';
      }
    if (traces.ctrl && cfg.trace.ctrl)
      {
        *traces.ctrl << kCtrlHeader << '\n';
      }

    for (const auto& [id, cell] : cells)
      {
        ChannelRows (cell);
      }
    if (cfg.dc.enabled)
      {
        engine.schedule_at (0.0, "measurement", [this] { Measure (0); });
      }
    if (cfg.channel.update_period_s < cfg.duration_s)
      {
        engine.schedule_at (cfg.channel.update_period_s, "channel-update", [this] { ChannelUpdate (1); });
      }
    for (const auto& [id, cell] : cells)
      {
        const int cellId = id;
        engine.schedule_at (0.0, "subframe", [this, cellId] { Tick (cellId); });
      }
    if (cfg.channel.blockage.mode == BlockageMode::Scripted)
      {
        for (const auto& w : cfg.channel.blockage.windows)
          {
            if (w.start_s < cfg.duration_s)
              {
                engine.schedule_at (w.start_s, "blockage-start", [this, w] { SetWindowBlockage (w.cell_id, true); });
                engine.schedule_at (w.end_s, "blockage-end", [this, w] { SetWindowBlockage (w.cell_id, false); });
              }
          }
      }
    for (const auto& h : cfg.dc.scripted_handovers)
      {
        engine.schedule_at (h.time_s, "scripted-handover", [this, h] { TriggerHandover (h.target_cell); });
      }
    for (const auto& r : cfg.reconfigurations)
      {
        engine.schedule_at (r.time_s, "reconfiguration", [this, r] {
          const Cell& cell = cells.at (mmCellIds.front ());
          std::vector<channel::CarrierConfig> subset;
          for (int id : r.cc_ids)
            {
              subset.push_back (cell.set.carrier (id));
            }
          reconfigurator.reconfigure_carriers (kUeId, ca::CarrierSet (subset, cell.set.primary_cc_id ()),
                                               engine.now ());
          Ctrl ("RRC_RECONFIGURATION", Node (cell.cfg.cell_id, anchorId), "ue" + std::to_string (kUeId), "air",
                cell.set.primary_cc_id ());
        });
      }
    if (cfg.traffic.kind == TrafficKind::Cbr && cfg.rlc_mode != rlc::RlcMode::Sm)
      {
        const double interval = cfg.traffic.packet_bytes * 8.0 / cfg.traffic.rate_bps;
        ScheduleCbr (0, interval);
      }

    stats.events_processed = engine.run_until (cfg.duration_s);

    RunMetrics m;
    m.duration_s = cfg.duration_s;
    m.s_rlc_bps = static_cast<double> (deliveredBytes) * 8.0 / cfg.duration_s;
    for (const auto& [key, bytes] : macAcked)
      {
        m.per_cc_mac_bps[key] = static_cast<double> (bytes) * 8.0 / cfg.duration_s;
      }
    m.handover_count = static_cast<int> (stats.handovers_done);
    std::int64_t fb = fallbackUs;
    if (fallbackSinceUs)
      {
        fb += to_us (cfg.duration_s) - *fallbackSinceUs;
      }
    m.fallback_time_fraction = static_cast<double> (fb) / static_cast<double> (to_us (cfg.duration_s));
    return m;
  }

  void ScheduleCbr (std::uint64_t k, double interval)
  {
    const double at = static_cast<double> (k) * interval;
    if (at >= cfg.duration_s)
      {
        return;
      }
    engine.schedule_at (at, "cbr", [this, k, interval] {
      NewSdu (cfg.traffic.packet_bytes);
      ScheduleCbr (k + 1, interval);
    });
  }
};

Simulation::Simulation (const ScenarioConfig& config, std::uint64_t seed, TraceSet traces)
  : m_impl (std::make_unique<Impl> (config, seed, traces))
{
}

Simulation::~Simulation () = default;

RunMetrics
Simulation::run ()
{
  return m_impl->Run ();
}

std::size_t
Simulation::channel_count () const
{
  std::size_t n = 0;
  for (const auto& [id, cell] : m_impl->cells)
    {
      n += cell.slots.size ();
    }
  return n;
}

const channel::CarrierChannel&
Simulation::channel (int cellId, int ccId) const
{
  return *m_impl->SlotOf (cellId, ccId).ch;
}

bool
Simulation::has_split_bearer () const
{
  return m_impl->cfg.dc.enabled;
}

std::size_t
Simulation::x2_link_count () const
{
  return m_impl->x2.size ();
}

const RunStats&
Simulation::stats () const
{
  return m_impl->stats;
}

std::optional<dc::DcState>
Simulation::dc_state () const
{
  if (!m_impl->cfg.dc.enabled)
    {
      return std::nullopt;
    }
  return m_impl->dcState;
}

std::unique_ptr<Simulation>
build_scenario (const ScenarioConfig& config, std::uint64_t seed, TraceSet traces)
{
  return std::make_unique<Simulation> (config, seed, traces);
}

} // namespace mcsim::scenario
