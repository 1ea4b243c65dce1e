"""配置管理模块"""
import configparser
import os

# 可通过环境变量指定其他配置文件
CONFIG_ENV_VAR = 'PI_TUNING_CONFIG'


class Config:
    """配置管理类"""

    def __init__(self, config_file=None):
        """初始化配置

        Args:
            config_file: 配置文件路径，缺省时读取环境变量或当前目录下的 config.ini
        """
        self.config = configparser.ConfigParser()
        self.config_file = config_file or os.environ.get(CONFIG_ENV_VAR, 'config.ini')

        # 尝试读取配置文件，不存在时全部使用默认值
        if os.path.exists(self.config_file):
            self.config.read(self.config_file, encoding='utf-8')

    def get_dt(self):
        """获取仿真步长（秒）"""
        return self.config.getfloat('simulation', 'dt', fallback=0.005)

    def get_band(self):
        """获取稳定带比例"""
        return self.config.getfloat('simulation', 'band', fallback=0.02)

    def get_horizon_factor(self):
        """获取仿真时长系数"""
        return self.config.getfloat('simulation', 'horizon_factor', fallback=30.0)

    def get_monotonic_tol(self):
        """获取单调性判定容差"""
        return self.config.getfloat('simulation', 'monotonic_tol', fallback=1e-9)

    def get_final_value_fraction(self):
        """获取终值估计使用的尾部样本比例"""
        return self.config.getfloat('simulation', 'final_value_fraction', fallback=0.01)

    def get_points_per_decade(self):
        """获取峰值搜索网格密度"""
        return self.config.getint('frequency', 'points_per_decade', fallback=2000)

    def get_span_decades(self):
        """获取峰值搜索的十倍频程跨度"""
        return self.config.getfloat('frequency', 'span_decades', fallback=3.0)

    def get_peak_rtol(self):
        """获取峰值细化的相对频率容差"""
        return self.config.getfloat('frequency', 'peak_rtol', fallback=1e-10)

    def get_export_points(self):
        """获取导出网格点数"""
        return self.config.getint('frequency', 'export_points', fallback=500)

    def get_export_span_decades(self):
        """获取导出网格的十倍频程跨度"""
        return self.config.getfloat('frequency', 'export_span_decades', fallback=2.0)

    def get_cancellation_rtol(self):
        """获取零极点对消判定容差"""
        return self.config.getfloat('analysis', 'cancellation_rtol', fallback=1e-8)

    def get_output_format(self):
        """获取默认输出格式"""
        return self.config.get('output', 'format', fallback='text')

    def get_log_level(self):
        """获取日志级别"""
        return self.config.get('logging', 'level', fallback='WARNING').upper()


# 全局配置实例
config = Config()
