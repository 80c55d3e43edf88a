#pragma once

#include <cstdint>

// Corpus-scale figures reported for the 2012 CommonCrawl crawl. They cannot
// be recomputed at desk scale and are kept for comparison in reports and
// documentation only.
namespace tracknet::reference {

inline constexpr std::uint64_t kSitePlds = 41'192'060;
inline constexpr std::uint64_t kThirdParties = 12'756'244;
inline constexpr std::uint64_t kThirdPartyEmbeddings = 140'613'762;
inline constexpr std::uint64_t kTrackers = 355;
inline constexpr std::uint64_t kTrackerEmbeddings = 36'982'655;

// google-analytics.com over all site PLDs.
inline constexpr double kGoogleAnalyticsRankShare = 0.507;
inline constexpr double kGoogleAnalyticsDomainShare = 0.248;

// Tracker degree distribution of the tracking network.
inline constexpr double kPowerLawAlpha = 1.725;
inline constexpr std::uint64_t kPowerLawXMin = 6'848;

inline constexpr double kAssortativity = -0.1863;

// Pruned co-occurrence graph after the 2-core cleanup.
inline constexpr std::uint64_t kCoreTrackers = 329;
inline constexpr std::uint64_t kCoreEdges = 1'857;
inline constexpr int kTrackerClusters = 11;

// Countries (of 50) where Facebook, Google and Twitter dominate.
inline constexpr int kDominatedCountries = 46;
inline constexpr int kCountriesStudied = 50;

}  // namespace tracknet::reference
