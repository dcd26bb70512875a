/* C interface to the manipulation core. All functions return a manip_status
 * code (0 on success); on failure manip_last_error() holds a thread-local
 * message valid until the next call on the same thread. Poses are row-major
 * 4x4 matrices; rotations row-major 3x3. */

#ifndef MANIP_CAPI_H
#define MANIP_CAPI_H

#include <stdint.h>

#if defined(_WIN32)
#define MANIP_API __declspec(dllexport)
#else
#define MANIP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum manip_status {
  MANIP_OK = 0,
  MANIP_E_INVALID_ARGUMENT = 1,
  MANIP_E_IO = 2,
  MANIP_E_PARSE = 3,
  MANIP_E_UNREACHABLE = 4,
  MANIP_E_NO_CONSENSUS = 5,
  MANIP_E_TOO_FEW_CORRESPONDENCES = 6,
  MANIP_E_INVALID_DEPTH = 7,
  MANIP_E_DEGENERATE_BASIS = 8,
  MANIP_E_POINT_AT_INFINITY = 9,
  MANIP_E_IMAGE_TOO_SMALL = 10,
  MANIP_E_EMPTY_INPUT = 11,
  MANIP_E_INTERNAL = 12
} manip_status;

/* Stable code string for a status, e.g. "E_UNREACHABLE"; "OK" for 0. */
MANIP_API const char* manip_status_name(int status);

/* Message from the most recent failing call on this thread ("" after any
 * succeeding call). */
MANIP_API const char* manip_last_error(void);

typedef struct manip_robot manip_robot;
typedef struct manip_image manip_image;
typedef struct manip_depth manip_depth;
typedef struct manip_features manip_features;
typedef struct manip_matches manip_matches;
typedef struct manip_workspace manip_workspace;

/* ---- Robot configuration ---- */

MANIP_API int manip_robot_default(manip_robot** out);
MANIP_API int manip_robot_load(const char* path, manip_robot** out);
MANIP_API void manip_robot_free(manip_robot* robot);

/* ---- Arm kinematics ---- */

MANIP_API int manip_fk(const manip_robot* robot, const double q[6], double out_pose[16]);

/* All closed-form branches (up to 8). out_q holds count*6 joint values;
 * out_near_singular flags solutions whose theta6 was pinned to
 * theta6_reference at the wrist singularity. */
MANIP_API int manip_ik(const manip_robot* robot, const double pose[16],
                       double theta6_reference, double out_q[48],
                       uint8_t out_near_singular[8], int* out_count);

/* Branch nearest to q_ref under the wrap-aware weighted metric. */
MANIP_API int manip_ik_select(const manip_robot* robot, const double pose[16],
                              const double q_ref[6], double out_q[6]);

/* ---- Omnidirectional base ---- */

MANIP_API int manip_base_wheel_speeds(const manip_robot* robot, double vx, double vy,
                                      double omega, double out_w[4]);
MANIP_API int manip_base_body_velocity(const manip_robot* robot, const double w[4],
                                       double out_v[3], double* out_residual);
/* pose and out_pose are (x, y, theta). */
MANIP_API int manip_base_integrate(const double pose[3], const double v[3], double dt,
                                   double out_pose[3]);

/* ---- Workspace sampling ---- */

MANIP_API int manip_workspace_sample(const manip_robot* robot, uint64_t samples,
                                     uint64_t seed, manip_workspace** out);
MANIP_API void manip_workspace_free(manip_workspace* ws);
MANIP_API int manip_workspace_stats(const manip_workspace* ws, uint64_t* out_samples,
                                    double* out_max_reach, double* out_volume_m3);
MANIP_API int manip_workspace_write_csv(const manip_workspace* ws, const char* path);
MANIP_API int manip_workspace_write_xyz(const manip_workspace* ws, const char* path);

/* ---- Images ---- */

MANIP_API int manip_image_load_pgm(const char* path, manip_image** out);
MANIP_API void manip_image_free(manip_image* img);
MANIP_API int manip_image_size(const manip_image* img, int* out_w, int* out_h);
MANIP_API int manip_depth_load_pgm(const char* path, manip_depth** out);
MANIP_API void manip_depth_free(manip_depth* depth);

/* ---- Features and matching ---- */

MANIP_API int manip_detect(const manip_image* img, int max_keypoints,
                           manip_features** out);
MANIP_API void manip_features_free(manip_features* f);
MANIP_API int manip_features_count(const manip_features* f, int* out_count);
MANIP_API int manip_features_keypoint(const manip_features* f, int idx, double* out_u,
                                      double* out_v, double* out_response,
                                      double* out_orientation);
MANIP_API int manip_features_descriptor(const manip_features* f, int idx,
                                        uint64_t out_words[4]);

/* method 0 = brute-force Hamming, 1 = exact k-d tree (identical results).
 * Distances are Hamming bits on both paths. */
MANIP_API int manip_match(const manip_features* tmpl, const manip_features* frame,
                          int method, double ratio, manip_matches** out);
MANIP_API void manip_matches_free(manip_matches* m);
MANIP_API int manip_matches_count(const manip_matches* m, int* out_count,
                                  int* out_degenerate);
MANIP_API int manip_matches_get(const manip_matches* m, int idx, int* out_template_idx,
                                int* out_frame_idx, double* out_distance);

/* ---- Homography and planar pose ---- */

/* corr is n packed (ut, vt, uf, vf) quads. out_inlier_mask may be NULL;
 * otherwise it receives n bytes aligned with the input order. */
MANIP_API int manip_estimate_homography(const double* corr, int n, double threshold_px,
                                        int max_iters, int min_inliers, uint64_t seed,
                                        double out_h[9], uint8_t* out_inlier_mask,
                                        int* out_inlier_count, int* out_iterations,
                                        double* out_mean_error_px);

MANIP_API int manip_planar_pose(const double h[9], int template_w, int template_h,
                                double physical_width_m, const manip_depth* depth,
                                double fx, double fy, double cx, double cy,
                                double depth_scale_m, double out_position[3],
                                double out_frame[9], double out_euler_zyx[3],
                                int* out_gimbal_lock);

/* ---- Grasp transforms ---- */

MANIP_API int manip_grasp_record(const double to[16], const double tb[16],
                                 double out_tg[16]);
MANIP_API int manip_grasp_adapt(const double to_new[16], const double tg[16],
                                double out_pose[16]);
MANIP_API int manip_grasp_angles(const double pose[16], double out_zyx[3],
                                 int* out_gimbal_lock);

/* Euler ZYX extraction from a pose; out_zyx = (yaw z, pitch y, roll x). The
 * same ordering applies to every out_zyx / out_euler_zyx above. */
MANIP_API int manip_euler_from_pose(const double pose[16], double out_zyx[3],
                                    int* out_gimbal_lock);

/* ---- Simulation ---- */

/* Runs the track-and-grasp pipeline and returns the metrics report as a JSON
 * string (caller frees with manip_string_free). robot_path NULL selects the
 * built-in robot. has_* of zero leaves the scene's own value in force.
 * include_timing adds wall-clock fields, which vary run to run. */
MANIP_API int manip_simulate(const char* scene_path, const char* robot_path,
                             int has_seed, uint64_t seed, int has_threshold,
                             double threshold_cm, int has_trials, int trials,
                             int include_timing, char** out_json);
MANIP_API void manip_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* MANIP_CAPI_H */
